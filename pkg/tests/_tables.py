"""Reference benchmark tables the catalog reproduces.

Columns per problem id: mesh sizes 1/8 ... 1/512, L2 error, broken-H1
error, interior nodal error (degree-1 problems only), and the 2-norm
condition number (degree-1 problems only).
"""

H_SEQUENCE = [1 / 8, 1 / 16, 1 / 32, 1 / 64, 1 / 128, 1 / 256, 1 / 512]

L2 = {
    1: [1.43943e-03, 3.40683e-04, 8.39493e-05, 2.09052e-05, 5.22499e-06, 1.30868e-06, 3.26874e-07],
    2: [8.58406e-03, 2.11391e-03, 5.30238e-04, 1.32359e-04, 3.31638e-05, 8.29035e-06, 2.07405e-06],
    3: [8.58383e-03, 2.11387e-03, 5.30234e-04, 1.32358e-04, 3.31640e-05, 8.29083e-06, 2.07413e-06],
    4: [5.26785e-05, 6.50740e-06, 8.10800e-07, 1.01260e-07, 1.26572e-08, 1.58255e-09, 1.97777e-10],
    5: [6.27646e-04, 8.13417e-05, 1.02475e-05, 1.28511e-06, 1.60820e-07, 2.01127e-08, 2.51467e-09],
    6: [6.27649e-04, 8.13414e-05, 1.02475e-05, 1.28510e-06, 1.60819e-07, 2.01127e-08, 2.51466e-09],
}

H1 = {
    1: [6.59920e-02, 3.24574e-02, 1.61603e-02, 8.07152e-03, 4.03471e-03, 2.01723e-03, 1.00859e-03],
    2: [2.91716e-01, 1.46341e-01, 7.35572e-02, 3.67855e-02, 1.84188e-02, 9.21011e-03, 4.60678e-03],
    3: [2.91715e-01, 1.46341e-01, 7.35577e-02, 3.67868e-02, 1.84202e-02, 9.21222e-03, 4.61030e-03],
    4: [2.78963e-03, 6.78494e-04, 1.68376e-04, 4.20145e-05, 1.05011e-05, 2.62599e-06, 6.56287e-07],
    5: [3.33102e-02, 8.48195e-03, 2.12831e-03, 5.33221e-04, 1.33419e-04, 3.33693e-05, 8.34410e-06],
    6: [3.33100e-02, 8.48190e-03, 2.12830e-03, 5.33218e-04, 1.33418e-04, 3.33692e-05, 8.34407e-06],
}

# The degree-1 nodal columns; rows 1/64 and 1/512 of problem 1 are flagged
# anomalous in the source table (our computed mantissas match every row but
# those two exponents), so order checks exclude them.
NODAL = {
    1: [4.85121e-03, 1.01654e-03, 2.46808e-04, 6.12768e-04, 1.53121e-04, 3.82653e-06, 9.56539e-07],
    2: [2.07071e-02, 4.56597e-03, 1.11087e-03, 2.76462e-04, 6.91011e-05, 1.72680e-05, 4.31719e-06],
    3: [2.07048e-02, 4.56552e-03, 1.11075e-03, 2.76434e-04, 6.90932e-05, 1.72659e-05, 5.16955e-06],
}
NODAL_ANOMALOUS_ROWS = {1: (3, 6)}  # indices of h=1/64 and h=1/512

COND = {
    1: [0.137850e+06, 0.143171e+06, 0.271847e+06, 0.346975e+06, 0.125160e+07, 0.839319e+07, 0.835384e+08],
    2: [0.127626e+05, 0.109720e+06, 0.304583e+06, 0.175135e+07, 0.511390e+07, 0.277080e+08, 0.825348e+08],
    3: [0.516955e+06, 0.207890e+06, 0.422880e+06, 0.175140e+07, 0.511405e+07, 0.277086e+08, 0.129948e+09],
}
