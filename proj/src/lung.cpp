#include "wkde/lung.hpp"

#include <cmath>

namespace wkde {

// 61 patients with inoperable lung carcinoma treated with cyclophosphamide:
// 33 deaths on study and 28 removals whose eventual failure times were
// collected by follow-up. Removal times carry the ultimate survival time;
// the follow-up values are contaminated by later therapies, so they bound
// the residual lifetime rather than replace it.
const std::vector<LungRecord>& lung_dataset()
{
  static const double nan = std::nan("");
  static const std::vector<LungRecord> data = {
    // observed deaths
    { 0.43, 1, nan },  { 2.86, 1, nan },  { 3.14, 1, nan },
    { 3.14, 1, nan },  { 3.43, 1, nan },  { 3.43, 1, nan },
    { 3.71, 1, nan },  { 3.86, 1, nan },  { 6.14, 1, nan },
    { 6.86, 1, nan },  { 9.00, 1, nan },  { 9.43, 1, nan },
    { 10.71, 1, nan }, { 10.86, 1, nan }, { 11.14, 1, nan },
    { 13.00, 1, nan }, { 14.43, 1, nan }, { 15.71, 1, nan },
    { 18.43, 1, nan }, { 18.57, 1, nan }, { 20.71, 1, nan },
    { 29.14, 1, nan }, { 29.71, 1, nan }, { 40.57, 1, nan },
    { 48.57, 1, nan }, { 49.43, 1, nan }, { 53.86, 1, nan },
    { 61.86, 1, nan }, { 66.57, 1, nan }, { 68.71, 1, nan },
    { 68.96, 1, nan }, { 72.86, 1, nan }, { 72.86, 1, nan },
    // removals: observed censored time (ultimate survival time)
    { 0.14, 0, 3.00 },   { 0.14, 0, 12.43 },  { 0.29, 0, 1.14 },
    { 0.43, 0, 17.14 },  { 0.57, 0, 4.43 },   { 0.57, 0, 5.43 },
    { 1.86, 0, 12.14 },  { 3.00, 0, 7.86 },   { 3.00, 0, 13.86 },
    { 3.29, 0, 10.57 },  { 3.29, 0, 34.43 },  { 6.00, 0, 7.86 },
    { 6.00, 0, 38.00 },  { 6.14, 0, 9.29 },   { 8.17, 0, 20.43 },
    { 10.57, 0, 25.00 }, { 11.86, 0, 17.29 }, { 15.57, 0, 51.57 },
    { 16.57, 0, 45.00 }, { 17.29, 0, 24.14 }, { 18.71, 0, 29.43 },
    { 21.29, 0, 26.71 }, { 23.86, 0, 29.00 }, { 26.00, 0, 53.86 },
    { 27.57, 0, 49.71 }, { 32.14, 0, 63.86 }, { 33.14, 0, 99.00 },
    { 47.29, 0, 48.71 },
  };
  return data;
}

} // namespace wkde
