"""Project constants and default settings."""

# Gaussian centres and widths per term count.
MIXTURE_CENTERS = {
    1: (0.5,),
    2: (0.25, 0.75),
}
MIXTURE_WIDTHS = {
    1: (0.1581,),
    2: (0.1, 0.1),
}

Z_MEAN = 5.0
Z_STD = 1.5

N_CURVES = 21
GRID_SIZE = 1000

F1_B_RANGE = (-1.0, 1.0)
F2_C_SET = (0, 1, 2, 3)
F2_B_MAX = 0.09
F2_MONOTONE_MARGIN = 0.95

WARP_FAMILIES = ("F1", "F2", "none")

PRESETS = {
    "f1-n1": {"warp_family": "F1", "n_terms": 1},
    "f1-n2": {"warp_family": "F1", "n_terms": 2},
    "f2-n1": {"warp_family": "F2", "n_terms": 1},
    "f2-n2": {"warp_family": "F2", "n_terms": 2},
}

DEFAULT_BASIS_SIZE = 30
DEFAULT_WARP_COEFFS = 10
DEFAULT_QUAD_SIZE = 1001
MIN_QUAD_SIZE = 51
DEFAULT_EVAL_GRID = 201
MIN_EVAL_GRID = 21
DEFAULT_LAMBDA = 1e-2
DEFAULT_DENOM_FLOOR = 1e-6

EXP_CLAMP = 40.0
MASKED_WARN_FRACTION = 0.05

SWEEP_ORDERS = (10, 15, 20, 25, 30, 35, 40, 45)
SWEEP_KINDS = ("fourier", "bspline")

CSV_FLOAT_FORMAT = "%.17g"
THREADS_ENV = "WARPREG_THREADS"
