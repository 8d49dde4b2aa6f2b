#include <math.h>
#include <stdio.h>
#include "erfkit.h"

int main(void) {
    ErfkitApproximant *h = NULL;
    if (erfkit_approximant_new("{\"family\":\"spline\",\"order\":2,\"digits\":34}", 0.0, &h) != ERFKIT_STATUS_OK) {
        fprintf(stderr, "%s\n", erfkit_last_error());
        return 1;
    }
    double v = 0.0;
    if (erfkit_eval(h, 1.0, &v) != ERFKIT_STATUS_OK) return 2;
    erfkit_approximant_free(h);
    if (fabs(v - erf(1.0)) > 1e-3) return 3;
    if (erfkit_approximant_new("{", 0.0, &h) != ERFKIT_STATUS_PARSE) return 4;
    printf("ok %.12f\n", v);
    return 0;
}
