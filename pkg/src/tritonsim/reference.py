"""Published optimal parameter vectors for the 4-block ansatz, index ``4 * block + qubit``."""

TABLE1 = {
    "vqe": (3.844, -0.681, 6.510, 3.526, -4.452, 7.411, 4.764, 5.181,
            -5.026, 0.444, -1.456, 5.666, 2.047, 3.881, -0.937, -3.530),
    "vqd": (4.891, 1.247, -4.682, -2.074, -3.245, -1.542, 3.301, -5.139,
            -3.043, 3.870, 4.424, 2.058, -5.118, -1.609, 4.680, 5.944),
    "vqeac": (3.206, -1.154, -1.938, -1.819, -2.934, 1.126, 4.010, -4.399,
              -2.199, 4.315, 4.011, 0.284, -3.206, 0.114, 4.700, 6.185),
}
