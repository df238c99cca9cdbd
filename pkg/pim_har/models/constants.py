import math

# Physical constants
STANDARD_GRAVITY = 9.80665  # m/s²

# Windowing defaults, in seconds (converted with the dataset sample rate)
DEFAULT_WINDOW_SECONDS = 2.0
DEFAULT_STEP_SECONDS = 0.5

# Gravity separation / de-noising filter
FILTER_ORDER = 4
FILTER_CUTOFF_HZ = 2.0

# Pseudo-label discretization
N_BINS = 11
ANGLE_RANGE = (-math.pi, math.pi)
ANGLE_BIN_WIDTH = 2 * math.pi / 10  # ≈ 0.628, ten interior thresholds
ANGLE_AXES = ("x", "y", "z")

# Madgwick orientation filter
MADGWICK_BETA = 0.1
MADGWICK_SETTLE_SECONDS = 0.5

# Gravity vectors shorter than this are treated as undefined
MIN_GRAVITY_NORM = 1e-6

# Encoder / heads architecture
CONV_CHANNELS = (32, 64, 96)
KERNEL_SIZES = (24, 16, 8)
CONV_STRIDE = 1
DROPOUT_RATE = 0.1
HEAD_HIDDEN = (256, 128)
LAYER_NORM_EPS = 1e-5

# Optimization
LEARNING_RATE = 0.0004
ADAM_BETA1 = 0.9
ADAM_BETA2 = 0.999
ADAM_EPS = 1e-8
MAX_EPOCHS = 100
BATCH_SIZE = 64
VAL_FRACTION = 0.3

# Few-shot regime: budgets at or below this train without a validation split
FEW_SHOT_MAX_K = 8

# Augmentation
PERMUTE_SEGMENTS = 4
WARP_KNOTS = 4
WARP_SIGMA = 0.2
AUGMENTATIONS = ("permute", "time_warp", "flip")

# Evaluation
N_RUNS = 10

# Seed streams: every random draw uses default_rng([seed, <stream>, ...])
STREAM_INIT_ENCODER = 0
STREAM_INIT_HEAD = 1
STREAM_SPLIT = 2
STREAM_SHUFFLE = 3
STREAM_DROPOUT = 4
STREAM_FEW_SHOT = 5
STREAM_AUGMENT = 6
STREAM_SYNTHETIC = 7
