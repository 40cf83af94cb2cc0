#include <stdio.h>
#include "bifinite.h"

static const char *KX2 = "vertex v\narrow x: v -> v\nrelation x.x\ncap 2\n\ngenerator v\n";

int main(void) {
    BifiniteExtension *ext = NULL;
    if (bifinite_extension_load(KX2, 1009, false, &ext) != BIFINITE_STATUS_OK) {
        fprintf(stderr, "%s\n", bifinite_last_error());
        return 1;
    }
    size_t a = 0, b = 0;
    bifinite_extension_dims(ext, &a, &b);
    printf("dims %zu %zu\n", a, b);

    BifinitePd n_b;
    char *json = NULL;
    if (bifinite_extension_check(ext, 10, &n_b, &json) != BIFINITE_STATUS_OK) {
        return 1;
    }
    printf("n_b %s %zu\n", n_b.kind == BIFINITE_PD_KIND_FINITE ? "finite" : "other", n_b.value);
    bifinite_string_free(json);
    bifinite_extension_free(ext);

    BifiniteStatus s = bifinite_extension_load("arrow a: 1 -> 2\n", 1009, false, &ext);
    printf("parse error %d\n", (int)s);
    return ext == NULL ? 0 : 1;
}
