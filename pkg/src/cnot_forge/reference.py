"""Published reference values the benchmarks are compared against."""

# lines -> (AECM, Algorithm 1, MCG or None, MCG nonconvergent or None)
TABLE1 = {
    8: (20.06, 27.97, 19.32, 0),
    12: (43.25, 62.41, 40.65, 0),
    16: (74.06, 108.1, 70.94, 0),
    20: (114.95, 165.63, 109.82, 1),
    24: (167.41, 233.96, 161.49, 0),
    28: (230.59, 315.74, 230.68, 0),
    32: (304.57, 376.62, 321.48, 4),
    36: (393.68, 468.01, 418.17, 42),
    40: (492.84, 570.12, 510.63, 88),
    44: (606.18, 681.32, None, None),
    48: (735.64, 800.09, None, None),
    52: (873.87, 930.48, None, None),
    56: (1028.95, 1068.58, None, None),
    60: (1200.66, 1218.2, None, None),
    64: (1384.04, 1373.59, None, None),
}

# minimum CNOT count -> number of 5x5 invertible functions
TABLE2 = [1, 20, 260, 2570, 19680, 117860, 540470, 1769710, 3571175, 3225310, 736540, 15740, 24]
GL5_ORDER = 9999360

# exact-minimum hit counts over all of GL(5, 2)
HIT_COUNTS = {"mcg": 7175807, "aecm": 5886350, "algorithm1": 474738}
HIT_RATES = {k: v / GL5_ORDER for k, v in HIT_COUNTS.items()}
MCG_NONCONVERGENT_5 = 89

# 1000 runs on the 16-line test function: max, min, mean, median, stddev
TABLE3 = {
    "mcgp": (77, 59, 68.49, 68, 3.694098488),
    "aecmp": (84, 73, 77.89, 77, 3.287241944),
}

# worked examples: method -> gate count
COMPARE6_COUNTS = {"mcg": 12, "aecm": 13, "algorithm1": 15, "mcg-reorder": 8}
STUCK5_MCG_TRACE = [20, 16, 11, 5, 0]
COMPARE6_REORDER_PERMUTATION = (1, 0, 3, 5, 2, 4)
