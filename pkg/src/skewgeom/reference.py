"""Published benchmark values used by the reproduction drivers and tests."""

from __future__ import annotations

__all__ = [
    "PERFORMANCE_ROWS",
    "performance_row",
    "CLAIMS_TABLE",
    "TICKS_TABLE",
    "POWER_BETAS",
    "POWER_P_GRID",
]

# (p, beta, n, bias_p, mse_p, ci_p, bias_beta, mse_beta, ci_beta); 1000 replications.
# Printed as-is, including the malformed CI in the (0.2, 0.8, 50) row.
PERFORMANCE_ROWS = [
    (0.2, 0.2, 50, 0.0076, 0.002, (0.0671, 0.3481), 0.2004, 0.2333, (-3.5686, 4.3695)),
    (0.2, 0.2, 100, 0.0071, 0.0013, (0.1063, 0.308), 0.1743, 0.2162, (-2.1264, 2.8749)),
    (0.2, 0.2, 200, 0.0087, 0.0006, (0.1172, 0.3002), 0.1888, 0.2612, (-2.1558, 2.9335)),
    (0.2, 0.2, 300, 0.0077, 0.0005, (0.1385, 0.2769), 0.1864, 0.216, (-1.6828, 2.4555)),
    (0.2, 0.2, 400, 0.0072, 0.0005, (0.14, 0.2744), 0.2035, 0.2142, (-1.6186, 2.4255)),
    (0.2, 0.2, 500, 0.0068, 0.0004, (0.1481, 0.2654), 0.1643, 0.2004, (-1.3704, 2.0989)),
    (0.2, 0.5, 50, -0.0016, 0.0022, (0.0576, 0.3392), -0.1014, 0.2128, (-3.5133, 4.3105)),
    (0.2, 0.5, 100, 0.0036, 0.0011, (0.0997, 0.3076), -0.0464, 0.2038, (-2.1988, 3.1059)),
    (0.2, 0.5, 200, 0.0007, 0.0007, (0.1163, 0.2851), -0.065, 0.1983, (-2.1116, 2.9816)),
    (0.2, 0.5, 300, 0.0054, 0.0005, (0.1318, 0.2791), -0.004, 0.1794, (-1.5181, 2.51)),
    (0.2, 0.5, 400, 0.003, 0.0004, (0.1307, 0.2753), -0.0151, 0.1761, (-1.5029, 2.4726)),
    (0.2, 0.5, 500, 0.0027, 0.0003, (0.1371, 0.2682), -0.0164, 0.1867, (-1.305, 2.2721)),
    (0.2, 0.8, 50, -0.0053, 0.0023, (0.0051, 0.0043), -0.3514, 0.3332, (-3.3991, 4.2963)),
    (0.2, 0.8, 100, -0.0085, 0.0012, (0.0864, 0.2967), -0.287, 0.2899, (-2.2936, 3.3194)),
    (0.2, 0.8, 200, -0.0039, 0.0007, (0.0983, 0.294), -0.2802, 0.2706, (-0.2117, 3.1514)),
    (0.2, 0.8, 300, -0.003, 0.0005, (0.1176, 0.2763), -0.2423, 0.2537, (-1.6164, 2.7317)),
    (0.2, 0.8, 400, -0.002, 0.0004, (0.1141, 0.282), -0.1941, 0.2186, (-1.5557, 2.7675)),
    (0.2, 0.8, 500, -0.0038, 0.0003, (0.1254, 0.267), -0.2242, 0.2345, (-1.3207, 2.4723)),
    (0.5, 0.2, 50, 0.0068, 0.0016, (0.4122, 0.6015), 0.1061, 0.1138, (-0.6873, 1.2996)),
    (0.5, 0.2, 100, 0.0015, 0.0008, (0.4419, 0.5611), 0.0666, 0.0779, (-0.4902, 1.0233)),
    (0.5, 0.2, 200, 0.0034, 0.0004, (0.4635, 0.5433), 0.0371, 0.05, (-0.3281, 0.8031)),
    (0.5, 0.2, 300, 0.0004, 0.0003, (0.4693, 0.5314), 0.0103, 0.0328, (-0.2605, 0.6811)),
    (0.5, 0.2, 400, 0.0004, 0.0002, (0.4734, 0.5273), 0.0126, 0.0301, (-0.1894, 0.6145)),
    (0.5, 0.2, 500, 0.0006, 0.0001, (0.4766, 0.5246), 0.0047, 0.0266, (-0.1579, 0.5672)),
    (0.5, 0.5, 50, 0.0094, 0.0021, (0.395, 0.6293), -0.038, 0.1238, (-0.4585, 1.3824)),
    (0.5, 0.5, 100, 0.0069, 0.0011, (0.4263, 0.5875), -0.0377, 0.0998, (-0.2927, 1.2174)),
    (0.5, 0.5, 200, 0.0036, 0.0005, (0.4582, 0.549), -0.0267, 0.0582, (-0.0377, 0.9844)),
    (0.5, 0.5, 300, 0.0029, 0.0004, (0.465, 0.5409), -0.0219, 0.049, (0.0567, 0.8995)),
    (0.5, 0.5, 400, 0.0018, 0.0002, (0.4722, 0.5314), -0.0229, 0.0365, (0.1149, 0.8393)),
    (0.5, 0.5, 500, 0.0031, 0.0002, (0.4753, 0.5273), -0.0132, 0.0263, (0.1665, 0.8071)),
    (0.5, 0.8, 50, 0.0074, 0.0025, (0.3464, 0.6684), -0.1216, 0.1242, (-0.1273, 1.4841)),
    (0.5, 0.8, 100, 0.0067, 0.0017, (0.3907, 0.6227), -0.0998, 0.0933, (0.0811, 1.3193)),
    (0.5, 0.8, 200, 0.0079, 0.001, (0.4063, 0.6094), -0.0448, 0.0473, (0.2962, 1.2141)),
    (0.5, 0.8, 300, 0.0074, 0.0008, (0.4297, 0.5851), -0.0277, 0.0234, (0.4068, 1.1378)),
    (0.5, 0.8, 400, 0.0062, 0.0007, (0.4396, 0.5728), -0.0125, 0.0246, (0.4685, 1.1064)),
    (0.5, 0.8, 500, 0.0061, 0.0006, (0.4489, 0.5633), -0.0156, 0.0218, (0.5029, 1.0659)),
    (0.8, 0.2, 50, -0.0063, 0.0007, (0.7422, 0.8451), 0.0971, 0.0979, (-0.4496, 1.0439)),
    (0.8, 0.2, 100, -0.0027, 0.0003, (0.7605, 0.8342), 0.0641, 0.0613, (-0.3473, 0.8755)),
    (0.8, 0.2, 200, -0.0022, 0.0002, (0.7716, 0.8239), 0.0164, 0.0365, (-0.2378, 0.6705)),
    (0.8, 0.2, 300, -0.0006, 0.0001, (0.7783, 0.8206), 0.0036, 0.0286, (-0.1632, 0.5705)),
    (0.8, 0.2, 400, -0.0007, 0.0001, (0.7809, 0.8178), 0.0006, 0.0212, (-0.1191, 0.5204)),
    (0.8, 0.2, 500, -0.001, 0.0001, (0.7826, 0.8155), 0.0119, 0.0189, (-0.0722, 0.496)),
    (0.8, 0.5, 50, -0.0001, 0.0006, (0.7505, 0.8493), -0.0302, 0.088, (-0.1685, 1.1081)),
    (0.8, 0.5, 100, -0.0023, 0.0003, (0.7621, 0.8332), -0.0313, 0.0591, (-0.0051, 0.9425)),
    (0.8, 0.5, 200, 0.0002, 0.0002, (0.7742, 0.8261), 0.0368, 0.0405, (0.0937, 0.8327)),
    (0.8, 0.5, 300, -0.0003, 0.0001, (0.7782, 0.8213), -0.0072, 0.0248, (0.2022, 0.7833)),
    (0.8, 0.5, 400, -0.0004, 0.0001, (0.7809, 0.8183), -0.0033, 0.0188, (0.2403, 0.7504)),
    (0.8, 0.5, 500, -0.0007, 0.0001, (0.7825, 0.8162), -0.0094, 0.0156, (0.2618, 0.7194)),
    (0.8, 0.8, 50, 0.0069, 0.0005, (0.7611, 0.8526), -0.1037, 0.0773, (0.2993, 1.0932)),
    (0.8, 0.8, 100, 0.0026, 0.0002, (0.7705, 0.8348), -0.0534, 0.0359, (0.4664, 1.0269)),
    (0.8, 0.8, 200, 0.0025, 0.0001, (0.7806, 0.8244), -0.0242, 0.0148, (0.5801, 0.9715)),
    (0.8, 0.8, 300, 0.0014, 0.0001, (0.7833, 0.8195), -0.0231, 0.0077, (0.6148, 0.939)),
    (0.8, 0.8, 400, 0.0007, 0.0001, (0.7852, 0.8162), -0.0121, 0.0054, (0.6515, 0.9243)),
    (0.8, 0.8, 500, 0.0009, 0.0, (0.7871, 0.8147), -0.0126, 0.0043, (0.6671, 0.9077)),
]


def performance_row(p: float, beta: float, n: int) -> dict:
    for row in PERFORMANCE_ROWS:
        if row[:3] == (p, beta, n):
            keys = ("p", "beta", "n", "bias_p", "mse_p", "ci_p", "bias_beta", "mse_beta", "ci_beta")
            return dict(zip(keys, row))
    raise KeyError((p, beta, n))


_MODELS = ("rsg", "wg", "nb", "nd", "ngpl")

CLAIMS_TABLE = {
    "bins": ("0", "1", "2", "3", "4+"),
    "observed": (1563, 271, 32, 7, 2),
    "expected": {
        "rsg": (1564.687, 265.32, 38.48, 5.57, 0.96),
        "wg": (1564.27, 265.12, 39.05, 5.62, 0.94),
        "nb": (1564.54, 264.58, 39.44, 5.66, 0.78),
        "nd": (1563.70, 266.15, 38.75, 5.50, 0.90),
        "ngpl": (1564.57, 264.28, 39.69, 5.59, 0.87),
    },
    "chi2": {"rsg": (2.742, 2), "wg": (2.938, 2), "nb": (3.786, 2), "nd": (3.002, 2), "ngpl": (3.486, 2)},
    "p_value": {"rsg": 0.2538, "wg": 0.230, "nb": 0.151, "nd": 0.223, "ngpl": 0.176},
    "params": {"rsg": (0.145, 0.001), "wg": (0.873, 0.143), "nb": (1.309, 0.871), "nd": (-0.454, 0.141), "ngpl": (8.835, 7.874)},
    "variances": {"rsg": (0.0002, 1.618), "wg": (0.683, 0.022), "nb": (1.081, 0.214), "nd": (0.495, 0.019), "ngpl": (2.601, 0.439)},
    "cov_rsg": 0.0159,
    "aic": {"rsg": 1990.58, "wg": 1990.77, "nb": 1991.00, "nd": 1990.78, "ngpl": 1991.18},
    "lr": 1.2502,
    "reject": False,
}

TICKS_TABLE = {
    "bins": ("0", "1", "2", "3", "4", "5", "6", "7", "8-10", "11-14", "15+"),
    "observed": (4, 5, 11, 10, 9, 11, 3, 5, 7, 9, 8),
    "expected": {
        "rsg": (3.17, 7.89, 9.21, 8.99, 8.15, 7.12, 6.10, 5.16, 11.01, 7.88, 7.32),
        "wg": (5.36, 7.72, 8.41, 8.21, 7.57, 6.75, 5.90, 5.08, 11.10, 8.16, 7.74),
        "nb": (5.26, 7.35, 8.03, 7.96, 7.48, 6.80, 6.04, 5.28, 11.77, 8.69, 7.36),
        "nd": (5.46, 7.12, 7.75, 7.76, 7.40, 6.81, 6.12, 5.40, 12.12, 8.94, 7.16),
        "ngpl": (7.61, 7.66, 7.53, 7.25, 6.83, 6.31, 5.72, 5.10, 11.69, 8.84, 7.45),
    },
    "chi2": {"rsg": (7.2035, 8), "wg": (8.476, 8), "nb": (9.124, 8), "nd": (9.844, 8), "ngpl": (12.666, 8)},
    "p_value": {"rsg": 0.5148, "wg": 0.3884, "nb": 0.3320, "nd": 0.2761, "ngpl": 0.1239},
    # wg and nd points are printed outside their parameter domains
    "params": {"rsg": (0.833, 0.601), "wg": (0.834, 1.759), "nb": (1.777, 0.271), "nd": (1.276, 0.311), "ngpl": (2.312, 0.808)},
    "variances": {"rsg": (0.0003, 0.0422), "wg": (0.0008, 2.5250), "nb": (0.1211, 0.0034), "nd": (0.1600, 0.0038), "ngpl": (0.6839, 0.0010)},
    "cov_rsg": -0.0021,
    "aic": {"rsg": 477.92, "wg": 478.98, "nb": 479.92, "nd": 480.88, "ngpl": 483.44},
    "lr": 10.434,
    "reject": True,
}

POWER_BETAS = (1.00, 0.85, 0.70, 0.55, 0.40, 0.25, 0.10)
# the four plotted p values are not stated; this grid spans the plotted range
POWER_P_GRID = (0.25, 0.40, 0.55, 0.70)
