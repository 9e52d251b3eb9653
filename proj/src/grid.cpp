#include "pencil/grid.hpp"

#include <stdexcept>

namespace pencil {

CVec cumulative_simpson(const CVec& f, double h) {
  const size_t n = f.size();
  CVec out(n, 0.0);
  if (n < 2) return out;
  if (n == 2) {
    out[1] = 0.5 * h * (f[0] + f[1]);
    return out;
  }
  for (size_t k = 1; k < n; ++k) {
    if (k % 2 == 0) {
      out[k] = out[k - 2] + h / 3.0 * (f[k - 2] + 4.0 * f[k - 1] + f[k]);
    } else if (k + 1 < n) {
      out[k] = out[k - 1] + h / 12.0 * (5.0 * f[k - 1] + 8.0 * f[k] - f[k + 1]);
    } else {
      out[k] = out[k - 1] + h / 12.0 * (-f[k - 2] + 8.0 * f[k - 1] + 5.0 * f[k]);
    }
  }
  return out;
}

cplx simpson(const CVec& f, double h) {
  if (f.empty()) return 0.0;
  return cumulative_simpson(f, h).back();
}

CVec subsample(const CVec& fine, int stride) {
  if (stride <= 0 || fine.empty() || (fine.size() - 1) % static_cast<size_t>(stride) != 0) {
    throw std::invalid_argument("subsample: stride does not divide the grid");
  }
  CVec out;
  out.reserve((fine.size() - 1) / stride + 1);
  for (size_t k = 0; k < fine.size(); k += static_cast<size_t>(stride)) out.push_back(fine[k]);
  return out;
}

}  // namespace pencil
