#include "cornergas/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <mutex>
#include <stdexcept>

namespace cornergas::fft {

namespace {

// The FFTW planner is not re-entrant.
std::mutex& planner_mutex()
{
    static std::mutex m;
    return m;
}

}  // namespace

Buffer::Buffer(std::size_t n)
    : ptr_(static_cast<cplx*>(fftw_malloc(sizeof(cplx) * (n == 0 ? 1 : n)))), size_(n)
{
    if (!ptr_) throw std::bad_alloc();
}

void Buffer::Free::operator()(cplx* p) const noexcept { fftw_free(p); }

Plan::Plan(int n, Direction dir, int howmany, int distance, bool aligned) : n_(n)
{
    if (n <= 0 || howmany <= 0) throw std::invalid_argument("fft::Plan: non-positive size");
    if (distance == 0) distance = n;
    const int sign = dir == Direction::Forward ? FFTW_FORWARD : FFTW_BACKWARD;
    unsigned flags = FFTW_ESTIMATE;
    if (!aligned) flags |= FFTW_UNALIGNED;

    // FFTW_ESTIMATE never touches the arrays, a scratch buffer suffices.
    Buffer scratch(static_cast<std::size_t>(distance) * (howmany - 1) + n);
    auto* io = reinterpret_cast<fftw_complex*>(scratch.data());
    std::lock_guard lock(planner_mutex());
    plan_ = fftw_plan_many_dft(1, &n, howmany, io, nullptr, 1, distance, io, nullptr, 1, distance,
                               sign, flags);
    if (!plan_) throw std::runtime_error("fft::Plan: planner failed");
}

Plan::~Plan()
{
    if (plan_) {
        std::lock_guard lock(planner_mutex());
        fftw_destroy_plan(static_cast<fftw_plan>(plan_));
    }
}

Plan::Plan(Plan&& other) noexcept : plan_(other.plan_), n_(other.n_) { other.plan_ = nullptr; }

Plan& Plan::operator=(Plan&& other) noexcept
{
    if (this != &other) {
        if (plan_) {
            std::lock_guard lock(planner_mutex());
            fftw_destroy_plan(static_cast<fftw_plan>(plan_));
        }
        plan_ = other.plan_;
        n_ = other.n_;
        other.plan_ = nullptr;
    }
    return *this;
}

void Plan::execute(cplx* data) const
{
    auto* io = reinterpret_cast<fftw_complex*>(data);
    fftw_execute_dft(static_cast<fftw_plan>(plan_), io, io);
}

void transform(std::span<cplx> data, Direction dir)
{
    if (data.empty()) return;
    Plan plan(static_cast<int>(data.size()), dir, 1, 0, /*aligned=*/false);
    plan.execute(data.data());
}

std::size_t next_pow2(std::size_t n)
{
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

std::vector<cplx> multiply_truncated(std::span<const cplx> a, std::span<const cplx> b,
                                     std::size_t len)
{
    std::vector<cplx> out(len);
    if (a.empty() || b.empty() || len == 0) return out;
    const std::size_t na = std::min(a.size(), len), nb = std::min(b.size(), len);
    if (na * nb <= 4096) {
        for (std::size_t i = 0; i < na; ++i)
            for (std::size_t j = 0; j < nb && i + j < len; ++j) out[i + j] += a[i] * b[j];
        return out;
    }
    const std::size_t L = next_pow2(na + nb - 1);
    Buffer fa(L), fb(L);
    for (std::size_t i = 0; i < L; ++i) {
        fa[i] = i < na ? a[i] : cplx{};
        fb[i] = i < nb ? b[i] : cplx{};
    }
    Plan fwd(static_cast<int>(L), Direction::Forward);
    Plan bwd(static_cast<int>(L), Direction::Backward);
    fwd.execute(fa.data());
    fwd.execute(fb.data());
    for (std::size_t i = 0; i < L; ++i) fa[i] *= fb[i];
    bwd.execute(fa.data());
    const double scale = 1.0 / static_cast<double>(L);
    for (std::size_t i = 0; i < len && i < L; ++i) out[i] = fa[i] * scale;
    return out;
}

}  // namespace cornergas::fft
