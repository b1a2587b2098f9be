#include <stdio.h>
#include <assert.h>
#include <math.h>
#include "s3poly.h"

int main(void) {
    double sides[4] = {1.5707963267948966, 1.5707963267948966, 1.5707963267948966, 1.5707963267948966};
    S3PolyTuple *t = NULL;
    S3PolyStatus st = s3poly_solve(sides, 4, 7, 1e-10, &t);
    assert(st == S3_POLY_STATUS_OK);
    assert(s3poly_tuple_len(t) == 4);
    assert(s3poly_tuple_closure_residual(t) < 1e-10);
    double diag = 0.0;
    assert(s3poly_diagonal_length(t, 1, 3, &diag) == S3_POLY_STATUS_OK);
    S3PolyTuple *bent = NULL;
    assert(s3poly_bend(t, 2, 6.283185307179586, &bent) == S3_POLY_STATUS_OK);
    double a[16], b[16];
    s3poly_tuple_quaternions(t, a);
    s3poly_tuple_quaternions(bent, b);
    for (int i = 0; i < 16; i++) assert(fabs(a[i] - b[i]) < 1e-7);
    s3poly_tuple_free(bent);
    s3poly_tuple_free(t);
    printf("ffi smoke ok (diag = %.6f)\n", diag);
    return 0;
}
