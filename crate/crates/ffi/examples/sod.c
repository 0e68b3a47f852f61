/* cc -Iinclude examples/sod.c ../../target/release/liblagrangian1d_ffi.a -lm -lpthread -ldl -o sod */
#include <stdio.h>
#include <stdlib.h>
#include "lagrangian1d.h"

int main(void) {
    L1dSimulation *sim = NULL;
    char msg[256];
    if (l1d_simulation_new("sod", "sgh", 100, &sim) != L1D_STATUS_OK) {
        l1d_last_error_message(msg, sizeof msg);
        fprintf(stderr, "%s\n", msg);
        return 1;
    }
    L1dStatus st = l1d_simulation_run(sim);
    if (st != L1D_STATUS_OK) {
        l1d_last_error_message(msg, sizeof msg);
        fprintf(stderr, "run failed (%d): %s\n", (int)st, msg);
        l1d_simulation_free(sim);
        return (int)st;
    }
    size_t n = l1d_simulation_n_cells(sim), written = 0;
    double *x = malloc(n * sizeof *x), *rho = malloc(n * sizeof *rho);
    l1d_simulation_copy_field(sim, "x", x, n, &written);
    l1d_simulation_copy_field(sim, "rho", rho, n, &written);
    printf("t=%g steps=%zu\n", l1d_simulation_time(sim), l1d_simulation_steps(sim));
    for (size_t i = 0; i < n; i += 10)
        printf("%.4f %.5f\n", x[i], rho[i]);
    free(x);
    free(rho);
    l1d_simulation_free(sim);
    return 0;
}
