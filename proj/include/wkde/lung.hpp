#pragma once

#include <vector>

namespace wkde {

//! One patient from the bundled lung-carcinoma trial: observed time (death
//! or removal), death indicator, and for removed patients the ultimate
//! survival time collected by follow-up (NaN for deaths).
struct LungRecord {
  double time = 0.0;
  int death = 1;
  double ultimate = 0.0;
};

//! The bundled dataset: 33 observed deaths and 28 censored observations with
//! their ultimate survival times.
const std::vector<LungRecord>& lung_dataset();

} // namespace wkde
