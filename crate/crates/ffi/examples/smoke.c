#include <math.h>
#include <stdio.h>
#include "scatter1d.h"

int main(void) {
    S1dPotential *p = NULL;
    if (s1d_potential_from_json("{\"family\":\"delta\",\"params\":{\"v0\":2}}", &p) != S1D_STATUS_OK) {
        fprintf(stderr, "%s\n", s1d_last_error());
        return 1;
    }
    S1dComplex k = {1.0, 0.0};
    S1dJost j;
    double t, r;
    if (s1d_amplitudes(p, k, NULL, &j) != S1D_STATUS_OK ||
        s1d_transmission_reflection(&j, &t, &r) != S1D_STATUS_OK) {
        fprintf(stderr, "%s\n", s1d_last_error());
        return 1;
    }
    S1dZeroList *zs = NULL;
    if (s1d_scan(p, -1, 1, -3, -0.1, 0, &zs) != S1D_STATUS_OK) {
        fprintf(stderr, "%s\n", s1d_last_error());
        return 1;
    }
    S1dZero z;
    s1d_zero_list_get(zs, 0, &z);
    printf("T=%.17g R=%.17g zeros=%zu first=%.17g%+.17gi\n", t, r, s1d_zero_list_len(zs), z.location.re,
           z.location.im);
    s1d_zero_list_free(zs);
    s1d_potential_free(p);
    return fabs(t - 0.5) < 1e-12 ? 0 : 1;
}
