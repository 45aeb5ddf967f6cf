#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "tfrac/covmodel.hpp"
#include "tfrac/params.hpp"

namespace tfrac {

enum class SampleMethod { Circulant, Cholesky };

inline const char* to_string(SampleMethod m) {
    return m == SampleMethod::Circulant ? "circulant" : "cholesky";
}

class CovarianceNotPsd : public std::runtime_error {
  public:
    explicit CovarianceNotPsd(const std::string& what) : std::runtime_error(what) {}
};

// Stationary unit-lag increment sample X^J(0..n-1).
struct NoisePath {
    ProcessParams params;
    long n = 0;
    std::vector<double> values;
    std::uint64_t seed = 0;
    SampleMethod method = SampleMethod::Circulant;
};

// Path on the uniform grid t_i = i*delta, i = 0..n, values[0] = 0. Increments
// are delta^H draws of the (H, delta*lambda) noise (the scaling identity).
struct SamplePath {
    ProcessParams params;
    long n = 0;
    double delta = 1.0;
    std::vector<double> values;
    std::uint64_t seed = 0;
    SampleMethod method = SampleMethod::Circulant;

    double time_at(long i) const { return delta * static_cast<double>(i); }
};

// Reusable sampling plan for fixed (model, n): circulant embedding of
// gamma(0..M), M = next power of two >= 2n, with Toeplitz Cholesky fallback
// behind a jitter ladder. draw() is pure in the seed and thread-safe.
class NoiseSampler {
  public:
    // `force` pins the method; by default the embedding decides.
    NoiseSampler(const CovarianceModel& model, long n,
                 std::optional<SampleMethod> force = std::nullopt);

    std::vector<double> draw(std::uint64_t seed) const;

    SampleMethod method() const { return method_; }
    double min_embedding_eigenvalue() const { return min_eig_; }
    long length() const { return n_; }

  private:
    void build_circulant(const CovarianceModel& model);
    bool build_cholesky(const CovarianceModel& model);

    ProcessParams params_;
    long n_;
    SampleMethod method_ = SampleMethod::Circulant;
    double min_eig_ = 0.0;
    std::vector<double> scale_;  // circulant: sqrt(max(d_k,0)/L)
    std::vector<double> chol_;   // cholesky: row-major lower factor
};

NoisePath sample_noise(const CovarianceModel& model, long n, std::uint64_t seed);
SamplePath sample_path(const CovarianceModel& model, long n, double delta, std::uint64_t seed);

}  // namespace tfrac
