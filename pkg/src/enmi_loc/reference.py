"""Reference camera setup and error-probability curves (10,000 trials per point, keyed by N0).

A subset of the plotted points, enough to compare shapes and spot-check the
reproduction.
"""

REFERENCE_CAMERA = {
    "focal_length_cm": 0.0367,
    "height_cm": 58.3095,
    "pitch_deg": 35.9020,
    "vfov_deg": 39.3,
    "hfov_deg": 70.5,
}
REFERENCE_SIDE_CM = 20.0
REFERENCE_TILE_COUNT = 66
REFERENCE_ROW_WIDTHS = [5, 5, 7, 7, 9, 9, 11, 13]
REFERENCE_AMPLITUDE_MEAN = 128.0
REFERENCE_AMPLITUDE_STD = 32.0
REFERENCE_TRIALS = 10_000

NMI_ERROR = {
    0.0002: 0.0, 0.0004: 0.0, 0.0006: 0.0, 0.0008: 0.0, 0.001: 0.0,
    0.002: 0.0048, 0.003: 0.032, 0.004: 0.072, 0.005: 0.0992,
    0.006: 0.1248, 0.008: 0.1984, 0.01: 0.2479, 0.015: 0.3152,
    0.02: 0.351, 0.03: 0.3935, 0.04: 0.4251, 0.05: 0.4691,
    0.07: 0.4573, 0.1: 0.4907, 0.15: 0.4983, 0.2: 0.5062,
    0.3: 0.5055, 0.5: 0.4883, 1.0: 0.5139, 1.5: 0.4962, 2.0: 0.5105,
}

ENMI_ERROR = {
    0.0002: 0.0, 0.0004: 0.0, 0.0006: 0.0, 0.0008: 0.0, 0.001: 0.0,
    0.002: 0.0, 0.003: 0.0, 0.004: 0.0, 0.005: 0.0,
    0.006: 0.0, 0.008: 0.0016, 0.01: 0.0048, 0.015: 0.0208,
    0.02: 0.0576, 0.03: 0.1341, 0.04: 0.2, 0.05: 0.2401,
    0.07: 0.2895, 0.1: 0.3486, 0.15: 0.4201, 0.2: 0.4494,
    0.3: 0.4745, 0.5: 0.4921, 1.0: 0.5128, 1.5: 0.4847, 2.0: 0.4904,
}
