#include <math.h>
#include <stdio.h>
#include <string.h>

#include "purity.h"

#define CHECK(cond)                                                   \
    do {                                                              \
        if (!(cond)) {                                                \
            char msg[256];                                            \
            purity_last_error(msg, sizeof msg);                       \
            fprintf(stderr, "%s:%d: %s (%s)\n", __FILE__, __LINE__,   \
                    #cond, msg);                                      \
            return 1;                                                 \
        }                                                             \
    } while (0)

int main(void) {
    PurityEnsemble *ens = NULL;
    CHECK(purity_ensemble_bb84(0.39269908169872414, &ens) == PURITY_STATUS_OK);
    CHECK(purity_ensemble_labels(ens) == 4);

    double chi = 0.0;
    CHECK(purity_ensemble_holevo(ens, &chi) == PURITY_STATUS_OK);
    CHECK(chi > 0.0 && chi <= 1.0);

    double mus[5] = {0.0, 0.25, 0.5, 0.75, 1.0};
    PurityOptions opts = purity_options_default();
    opts.restarts = 4;
    PurityCurve *curve = NULL;
    CHECK(purity_curve_compute(ens, 0, mus, 5, &opts, &curve) == PURITY_STATUS_OK);
    CHECK(purity_curve_len(curve) == 5);

    double top = 0.0;
    CHECK(purity_curve_eval(curve, 2.0, &top) == PURITY_STATUS_OK);
    CHECK(fabs(top - 1.0) < 1e-6);

    size_t len = 0;
    CHECK(purity_curve_csv(curve, NULL, 0, &len) == PURITY_STATUS_BUFFER_TOO_SMALL);
    char csv[4096];
    CHECK(len < sizeof csv);
    CHECK(purity_curve_csv(curve, csv, sizeof csv, &len) == PURITY_STATUS_OK);
    CHECK(strncmp(csv, "mu,R_bits,P_bits\n", 17) == 0);

    PurityEnsemble *bad = NULL;
    CHECK(purity_ensemble_parse("2 1\n0.5 1 0\n0.5 x 0\n", &bad) == PURITY_STATUS_PARSE_ERROR);
    CHECK(bad == NULL);
    CHECK(purity_ensemble_holevo(NULL, &chi) == PURITY_STATUS_NULL_POINTER);

    purity_curve_free(curve);
    purity_ensemble_free(ens);
    printf("ok %s\n", purity_version());
    return 0;
}
