#include <stdio.h>
#include <string.h>
#include "cone_spectra.h"

int main(void) {
    CsCone *cone = NULL;
    if (cs_cone_new(3, 0.7853981633974483, 2.0, &cone) != CS_STATUS_OK) return 10;
    CsFiber f;
    if (cs_fiber(cone, 1, &f) != CS_STATUS_OK || f.multiplicity != 2) return 11;
    if (f.gamma != 0.75 || f.threshold != -1.0) return 12;

    int found = 0;
    double energy = 0.0, gap = 0.0;
    if (cs_interval_ground(2.0, 5.0, CS_BOUNDARY_NEUMANN, &found, &energy, &gap) != CS_STATUS_OK) return 13;
    if (!found || !(gap < 0.0) || !(energy < -1.0)) return 14;
    if (cs_interval_ground(2.0, 0.5, CS_BOUNDARY_DIRICHLET, &found, &energy, &gap) != CS_STATUS_OK || found) return 15;

    CsCone *bad = NULL;
    if (cs_cone_new(3, 2.0, 1.0, &bad) != CS_STATUS_INVALID_INPUT || bad) return 16;
    char msg[256];
    if (cs_last_error(msg, sizeof msg) == 0 || strstr(msg, "theta") == NULL) return 17;

    size_t n = 99;
    if (cs_fiber_count(cone, 6.0, 0.2, 0.5, &n) != CS_STATUS_OK || n != 0) return 18;
    cs_cone_free(cone);
    puts("ok");
    return 0;
}
