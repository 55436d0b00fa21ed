/* Builds and runs a model using nothing but the C header. */
#include <stdio.h>

#include "slants/slants.h"

int main(void) {
  slants_config config;
  slants_model* model = NULL;
  slants_step step;
  double x[1];
  int t;

  slants_config_default(&config);
  config.basis_size = 5;
  if (slants_model_create(&config, &model) != SLANTS_OK) {
    fprintf(stderr, "create failed: %s\n", slants_last_error());
    return 1;
  }
  for (t = 0; t < 120; ++t) {
    x[0] = (t % 7) * 0.25;
    if (slants_model_push(model, x, 1, &step) != SLANTS_OK) {
      fprintf(stderr, "push failed: %s\n", slants_last_error());
      slants_model_destroy(model);
      return 1;
    }
  }
  slants_model_destroy(model);
  return step.predicted ? 0 : 1;
}
