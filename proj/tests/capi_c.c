/*
 * Copyright 2026 pobstacle developers
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* The public header must compile as C. */
#include "pobs/pobs.h"

#include <stdio.h>

int main(void) {
  const double g[2] = {3.0, 4.0};
  double out[2];
  if (pobs_flux(g, 2, 3.0, 0.0, out) != POBS_OK) return 1;
  if (out[0] != 15.0 || out[1] != 20.0) return 1;
  printf("%s\n", pobs_version());
  return 0;
}
