#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace cornergas::fft {

using cplx = std::complex<double>;

/// Sign of the exponent: Forward computes sum x_j e^{-2 pi i jk/n},
/// Backward computes sum x_j e^{+2 pi i jk/n}. Neither is normalized.
enum class Direction { Forward, Backward };

/// SIMD-aligned scratch array of complex doubles.
class Buffer {
public:
    Buffer() = default;
    explicit Buffer(std::size_t n);

    cplx* data() noexcept { return ptr_.get(); }
    const cplx* data() const noexcept { return ptr_.get(); }
    std::size_t size() const noexcept { return size_; }
    std::span<cplx> span() noexcept { return {data(), size_}; }
    cplx& operator[](std::size_t i) noexcept { return ptr_[i]; }
    const cplx& operator[](std::size_t i) const noexcept { return ptr_[i]; }

private:
    struct Free {
        void operator()(cplx* p) const noexcept;
    };
    std::unique_ptr<cplx[], Free> ptr_;
    std::size_t size_ = 0;
};

/// In-place batched complex DFT of length n over `howmany` contiguous
/// vectors spaced `distance` apart. Plans use FFTW_ESTIMATE so the chosen
/// algorithm, and therefore the rounding, is reproducible run to run.
class Plan {
public:
    Plan(int n, Direction dir, int howmany = 1, int distance = 0, bool aligned = true);
    ~Plan();
    Plan(const Plan&) = delete;
    Plan& operator=(const Plan&) = delete;
    Plan(Plan&& other) noexcept;
    Plan& operator=(Plan&& other) noexcept;

    /// Thread-safe. `data` must be SIMD aligned when the plan was created
    /// with aligned = true (use Buffer).
    void execute(cplx* data) const;

    int length() const noexcept { return n_; }

private:
    void* plan_ = nullptr;
    int n_ = 0;
};

/// One-shot transform of a vector (allocates a plan; for small sizes).
void transform(std::span<cplx> data, Direction dir);

/// First `len` coefficients of the product of two power series.
std::vector<cplx> multiply_truncated(std::span<const cplx> a, std::span<const cplx> b,
                                     std::size_t len);

/// Smallest power of two >= n.
std::size_t next_pow2(std::size_t n);

}  // namespace cornergas::fft
