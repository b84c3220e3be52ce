#include "fft_backend.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <stdexcept>

namespace tctv::fft {

namespace {

// FFTW plan creation is not thread-safe; execution via the new-array
// interface is. Plans are cached per (dims, sign, howmany-layout) and created
// with FFTW_ESTIMATE so planning is deterministic and cheap.
struct PlanKey {
  std::vector<int> n;
  int sign;
  int howmany;
  int stride;
  bool operator<(const PlanKey& o) const {
    return std::tie(n, sign, howmany, stride) < std::tie(o.n, o.sign, o.howmany, o.stride);
  }
};

class PlanCache {
public:
  fftw_plan get(const PlanKey& key) {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = plans_.find(key);
    if (it != plans_.end()) return it->second;
    // Dummy buffer for planning; execution uses fftw_execute_dft on caller
    // buffers with identical layout. FFTW_UNALIGNED keeps the plan valid for
    // arbitrarily aligned vectors.
    std::int64_t total = 1;
    for (int d : key.n) total *= d;
    total *= key.stride;  // howmany transforms interleave at dist 1 inside one stride
    fftw_complex* buf = fftw_alloc_complex(static_cast<std::size_t>(total));
    if (!buf) throw std::bad_alloc();
    fftw_plan p;
    if (key.stride == 1 && key.howmany == 1) {
      p = fftw_plan_dft(static_cast<int>(key.n.size()), key.n.data(), buf, buf, key.sign,
                        FFTW_ESTIMATE | FFTW_UNALIGNED);
    } else {
      p = fftw_plan_many_dft(static_cast<int>(key.n.size()), key.n.data(), key.howmany, buf,
                             nullptr, key.stride, 1, buf, nullptr, key.stride, 1, key.sign,
                             FFTW_ESTIMATE | FFTW_UNALIGNED);
    }
    fftw_free(buf);
    if (!p) throw std::runtime_error("fftw: plan creation failed");
    plans_.emplace(key, p);
    return p;
  }

private:
  std::mutex mu_;
  std::map<PlanKey, fftw_plan> plans_;
};

PlanCache& cache() {
  static PlanCache c;
  return c;
}

void execute(const PlanKey& key, std::complex<double>* data) {
  fftw_plan p = cache().get(key);
  fftw_complex* buf = reinterpret_cast<fftw_complex*>(data);
  fftw_execute_dft(p, buf, buf);
}

}  // namespace

void trailing(std::complex<double>* data, const std::vector<std::int64_t>& dims, int sign) {
  if (dims.size() < 3) throw std::invalid_argument("fft::trailing: order must be >= 3");
  PlanKey key;
  // FFTW is row-major: slowest-varying dimension first. Our trailing modes
  // run mode-2 fastest, so feed dims reversed, and hop over the n0*n1 face.
  for (std::size_t k = dims.size(); k-- > 2;) key.n.push_back(static_cast<int>(dims[k]));
  key.sign = sign;
  key.stride = static_cast<int>(dims[0] * dims[1]);
  key.howmany = key.stride;
  execute(key, data);
}

void all_modes(std::complex<double>* data, const std::vector<std::int64_t>& dims, int sign) {
  PlanKey key;
  for (std::size_t k = dims.size(); k-- > 0;) key.n.push_back(static_cast<int>(dims[k]));
  key.sign = sign;
  key.stride = 1;
  key.howmany = 1;
  execute(key, data);
}

}  // namespace tctv::fft
