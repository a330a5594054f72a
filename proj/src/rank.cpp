#include "shgh/rank.hpp"

#include <fcntl.h>
#include <immintrin.h>
#include <sys/mman.h>
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <cstring>
#include <stdexcept>
#include <vector>

#include "shgh/primes.hpp"

namespace shgh {

std::size_t physical_memory() {
    long pages = sysconf(_SC_PHYS_PAGES);
    long size = sysconf(_SC_PAGE_SIZE);
    return pages > 0 && size > 0 ? static_cast<std::size_t>(pages) * static_cast<std::size_t>(size) : (4ull << 30);
}

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, const StorageOptions& opt)
    : rows_(rows), cols_(cols) {
    stride_ = std::max<std::size_t>(16, (cols + 15) & ~std::size_t(15));
    bytes_ = std::max<std::size_t>(64, rows * stride_ * sizeof(std::uint32_t));
    std::size_t budget = opt.ram_budget ? opt.ram_budget : physical_memory() / 10 * 6;
    void* p = MAP_FAILED;
    if (bytes_ > budget) {
        std::string dir = opt.spill_dir.empty() ? "/tmp" : opt.spill_dir;
        std::string tmpl = dir + "/shgh-matrix-XXXXXX";
        std::vector<char> name(tmpl.begin(), tmpl.end());
        name.push_back('\0');
        int fd = mkstemp(name.data());
        if (fd < 0) throw std::runtime_error("cannot create spill file in " + dir);
        unlink(name.data());
        if (ftruncate(fd, static_cast<off_t>(bytes_)) != 0) {
            close(fd);
            throw std::runtime_error("cannot size spill file");
        }
        p = mmap(nullptr, bytes_, PROT_READ | PROT_WRITE, MAP_SHARED, fd, 0);
        close(fd);
        mapped_ = true;
    } else {
        p = mmap(nullptr, bytes_, PROT_READ | PROT_WRITE, MAP_PRIVATE | MAP_ANONYMOUS, -1, 0);
    }
    if (p == MAP_FAILED) throw std::bad_alloc();
    data_ = static_cast<std::uint32_t*>(p);
}

DenseMatrix::~DenseMatrix() { release(); }

void DenseMatrix::release() {
    if (data_) munmap(data_, bytes_);
    data_ = nullptr;
}

DenseMatrix::DenseMatrix(DenseMatrix&& o) noexcept { *this = std::move(o); }

DenseMatrix& DenseMatrix::operator=(DenseMatrix&& o) noexcept {
    if (this != &o) {
        release();
        rows_ = o.rows_;
        cols_ = o.cols_;
        stride_ = o.stride_;
        bytes_ = o.bytes_;
        data_ = o.data_;
        mapped_ = o.mapped_;
        o.data_ = nullptr;
    }
    return *this;
}

namespace {

bool g_force_scalar = false;

// Lazy reduction parameters: accumulate up to `period` products in a u64
// lane, then fold x -> lo32(x) + hi32(x) * (2^32 mod p).
struct Mod {
    std::uint32_t p;
    std::uint64_t c2;
    std::size_t period;
    int folds;  // folds needed after the last in-loop fold
    int subs;   // conditional subtractions after that
    bool vector_ok;
};

using u128 = unsigned __int128;

Mod make_mod(std::uint32_t p) {
    Mod m{};
    m.p = p;
    m.c2 = (std::uint64_t(1) << 32) % p;
    const u128 top = ~std::uint64_t(0);
    u128 fold_bound = u128(0xFFFFFFFFu) + u128(0xFFFFFFFFu) * m.c2;
    u128 sq = u128(p - 1) * (p - 1);
    m.period = sq == 0 ? 1 << 20 : static_cast<std::size_t>(std::min<u128>((top - fold_bound) / sq, 1 << 20));
    u128 b = fold_bound;
    m.folds = 0;
    while (b >= (u128(1) << 32) && m.folds < 8) {
        u128 nb = u128(0xFFFFFFFFu) + (b >> 32) * m.c2;
        if (nb >= b) break;
        b = nb;
        ++m.folds;
    }
    m.subs = static_cast<int>(std::min<u128>(b / p, 1000));
    m.vector_ok = p < (1u << 31) && m.period >= 1 && m.subs <= 8 && fold_bound < top;
    return m;
}

constexpr std::size_t kAlign = 64;

template <class T>
struct AlignedBuf {
    T* ptr = nullptr;
    std::size_t n = 0;
    void resize(std::size_t k) {
        if (k <= n) return;
        std::free(ptr);
        std::size_t bytes = (k * sizeof(T) + kAlign - 1) / kAlign * kAlign;
        ptr = static_cast<T*>(std::aligned_alloc(kAlign, bytes));
        if (!ptr) throw std::bad_alloc();
        n = k;
    }
    ~AlignedBuf() { std::free(ptr); }
};

inline std::uint32_t neg(std::uint32_t x, std::uint32_t p) { return x ? p - x : 0; }

// ---------------------------------------------------------------- scalar

void gemm_scalar(std::uint32_t* const* C, std::size_t nrows, std::size_t ncols, const std::uint32_t* A,
                 std::size_t K, const std::uint32_t* const* B, const Mod& m) {
    std::vector<std::uint64_t> acc(ncols);
    std::size_t period = std::max<std::size_t>(1, m.period);
    for (std::size_t i = 0; i < nrows; ++i) {
        std::uint32_t* c = C[i];
        for (std::size_t j = 0; j < ncols; ++j) acc[j] = c[j];
        std::size_t since = 0;
        for (std::size_t k = 0; k < K; ++k) {
            std::uint64_t a = A[i * K + k];
            if (!a) continue;
            a = m.p - a;
            const std::uint32_t* b = B[k];
            for (std::size_t j = 0; j < ncols; ++j) acc[j] += a * b[j];
            if (++since == period) {
                for (std::size_t j = 0; j < ncols; ++j) acc[j] %= m.p;
                since = 0;
            }
        }
        for (std::size_t j = 0; j < ncols; ++j) c[j] = static_cast<std::uint32_t>(acc[j] % m.p);
    }
}

void axpy_scalar(std::uint32_t* x, const std::uint32_t* y, std::uint32_t a, std::size_t n, std::uint32_t p) {
    for (std::size_t j = 0; j < n; ++j)
        x[j] = static_cast<std::uint32_t>((x[j] + static_cast<std::uint64_t>(a) * y[j]) % p);
}

// ---------------------------------------------------------------- AVX-512

constexpr int MR512 = 6, NR512 = 24;

__attribute__((target("avx512f,avx512dq,avx512vl"))) inline __m512i fold512(__m512i x, __m512i lo, __m512i c2) {
    return _mm512_add_epi64(_mm512_and_si512(x, lo), _mm512_mul_epu32(_mm512_srli_epi64(x, 32), c2));
}

__attribute__((target("avx512f,avx512dq,avx512vl"))) void kernel512(const std::uint32_t* Ap,
                                                                      const std::uint32_t* Bt, std::size_t K,
                                                                      std::uint32_t* const* Cr, std::size_t col0,
                                                                      const Mod& m) {
    __m512i acc[MR512][3];
#pragma GCC unroll 6
    for (int r = 0; r < MR512; ++r)
#pragma GCC unroll 3
        for (int v = 0; v < 3; ++v)
            acc[r][v] = _mm512_cvtepu32_epi64(_mm256_loadu_si256(reinterpret_cast<const __m256i*>(Cr[r] + col0 + 8 * v)));
    const __m512i lo = _mm512_set1_epi64(0xFFFFFFFFll);
    const __m512i c2 = _mm512_set1_epi64(static_cast<long long>(m.c2));
    std::size_t k = 0;
    while (k < K) {
        std::size_t kend = std::min(K, k + m.period);
        for (; k < kend; ++k) {
            const std::uint32_t* bk = Bt + k * NR512;
            __m512i b0 = _mm512_cvtepu32_epi64(_mm256_load_si256(reinterpret_cast<const __m256i*>(bk)));
            __m512i b1 = _mm512_cvtepu32_epi64(_mm256_load_si256(reinterpret_cast<const __m256i*>(bk + 8)));
            __m512i b2 = _mm512_cvtepu32_epi64(_mm256_load_si256(reinterpret_cast<const __m256i*>(bk + 16)));
            const std::uint32_t* ak = Ap + k * MR512;
#pragma GCC unroll 6
            for (int r = 0; r < MR512; ++r) {
                __m512i a = _mm512_set1_epi32(static_cast<int>(ak[r]));
                acc[r][0] = _mm512_add_epi64(acc[r][0], _mm512_mul_epu32(a, b0));
                acc[r][1] = _mm512_add_epi64(acc[r][1], _mm512_mul_epu32(a, b1));
                acc[r][2] = _mm512_add_epi64(acc[r][2], _mm512_mul_epu32(a, b2));
            }
        }
#pragma GCC unroll 6
        for (int r = 0; r < MR512; ++r)
#pragma GCC unroll 3
            for (int v = 0; v < 3; ++v) acc[r][v] = fold512(acc[r][v], lo, c2);
    }
    const __m512i pv = _mm512_set1_epi64(m.p);
    for (int r = 0; r < MR512; ++r)
        for (int v = 0; v < 3; ++v) {
            __m512i x = acc[r][v];
            for (int f = 0; f < m.folds; ++f) x = fold512(x, lo, c2);
            for (int s = 0; s < m.subs; ++s) x = _mm512_min_epu64(x, _mm512_sub_epi64(x, pv));
            _mm256_storeu_si256(reinterpret_cast<__m256i*>(Cr[r] + col0 + 8 * v), _mm512_cvtepi64_epi32(x));
        }
}

__attribute__((target("avx512f,avx512dq,avx512vl"))) void axpy512(std::uint32_t* x, const std::uint32_t* y,
                                                                    std::uint32_t a, std::size_t n, const Mod& m) {
    const __m512i lo = _mm512_set1_epi64(0xFFFFFFFFll);
    const __m512i c2 = _mm512_set1_epi64(static_cast<long long>(m.c2));
    const __m512i pv = _mm512_set1_epi64(m.p);
    const __m512i av = _mm512_set1_epi32(static_cast<int>(a));
    std::size_t j = 0;
    for (; j + 8 <= n; j += 8) {
        __m512i xv = _mm512_cvtepu32_epi64(_mm256_loadu_si256(reinterpret_cast<const __m256i*>(x + j)));
        __m512i yv = _mm512_cvtepu32_epi64(_mm256_loadu_si256(reinterpret_cast<const __m256i*>(y + j)));
        __m512i t = _mm512_add_epi64(xv, _mm512_mul_epu32(av, yv));
        t = fold512(t, lo, c2);
        for (int f = 0; f < m.folds; ++f) t = fold512(t, lo, c2);
        for (int s = 0; s < m.subs; ++s) t = _mm512_min_epu64(t, _mm512_sub_epi64(t, pv));
        _mm256_storeu_si256(reinterpret_cast<__m256i*>(x + j), _mm512_cvtepi64_epi32(t));
    }
    axpy_scalar(x + j, y + j, a, n - j, m.p);
}

// ---------------------------------------------------------------- AVX2

constexpr int MR256 = 4, NR256 = 12;

__attribute__((target("avx2"))) inline __m256i fold256(__m256i x, __m256i lo, __m256i c2) {
    return _mm256_add_epi64(_mm256_and_si256(x, lo), _mm256_mul_epu32(_mm256_srli_epi64(x, 32), c2));
}

// values stay below 2^63, so the signed compare is safe
__attribute__((target("avx2"))) inline __m256i csub256(__m256i x, __m256i pv, __m256i pm1) {
    __m256i ge = _mm256_cmpgt_epi64(x, pm1);
    return _mm256_sub_epi64(x, _mm256_and_si256(ge, pv));
}

__attribute__((target("avx2"))) inline void store4(std::uint32_t* dst, __m256i x) {
    const __m256i idx = _mm256_setr_epi32(0, 2, 4, 6, 1, 3, 5, 7);
    __m256i packed = _mm256_permutevar8x32_epi32(x, idx);
    _mm_storeu_si128(reinterpret_cast<__m128i*>(dst), _mm256_castsi256_si128(packed));
}

__attribute__((target("avx2"))) void kernel256(const std::uint32_t* Ap, const std::uint32_t* Bt, std::size_t K,
                                                std::uint32_t* const* Cr, std::size_t col0, const Mod& m) {
    __m256i acc[MR256][3];
    for (int r = 0; r < MR256; ++r)
        for (int v = 0; v < 3; ++v)
            acc[r][v] = _mm256_cvtepu32_epi64(_mm_loadu_si128(reinterpret_cast<const __m128i*>(Cr[r] + col0 + 4 * v)));
    const __m256i lo = _mm256_set1_epi64x(0xFFFFFFFFll);
    const __m256i c2 = _mm256_set1_epi64x(static_cast<long long>(m.c2));
    std::size_t k = 0;
    while (k < K) {
        std::size_t kend = std::min(K, k + m.period);
        for (; k < kend; ++k) {
            const std::uint32_t* bk = Bt + k * NR256;
            __m256i b0 = _mm256_cvtepu32_epi64(_mm_load_si128(reinterpret_cast<const __m128i*>(bk)));
            __m256i b1 = _mm256_cvtepu32_epi64(_mm_load_si128(reinterpret_cast<const __m128i*>(bk + 4)));
            __m256i b2 = _mm256_cvtepu32_epi64(_mm_load_si128(reinterpret_cast<const __m128i*>(bk + 8)));
            const std::uint32_t* ak = Ap + k * MR256;
            for (int r = 0; r < MR256; ++r) {
                __m256i a = _mm256_set1_epi32(static_cast<int>(ak[r]));
                acc[r][0] = _mm256_add_epi64(acc[r][0], _mm256_mul_epu32(a, b0));
                acc[r][1] = _mm256_add_epi64(acc[r][1], _mm256_mul_epu32(a, b1));
                acc[r][2] = _mm256_add_epi64(acc[r][2], _mm256_mul_epu32(a, b2));
            }
        }
        for (int r = 0; r < MR256; ++r)
            for (int v = 0; v < 3; ++v) acc[r][v] = fold256(acc[r][v], lo, c2);
    }
    const __m256i pv = _mm256_set1_epi64x(m.p);
    const __m256i pm1 = _mm256_set1_epi64x(m.p - 1);
    for (int r = 0; r < MR256; ++r)
        for (int v = 0; v < 3; ++v) {
            __m256i x = acc[r][v];
            for (int f = 0; f < m.folds; ++f) x = fold256(x, lo, c2);
            for (int s = 0; s < m.subs; ++s) x = csub256(x, pv, pm1);
            store4(Cr[r] + col0 + 4 * v, x);
        }
}

// ---------------------------------------------------------------- driver

enum class Isa { Scalar, Avx2, Avx512 };

Isa pick_isa(const Mod& m) {
    if (g_force_scalar || !m.vector_ok) return Isa::Scalar;
    __builtin_cpu_init();
    if (__builtin_cpu_supports("avx512f") && __builtin_cpu_supports("avx512dq") && __builtin_cpu_supports("avx512vl"))
        return Isa::Avx512;
    if (__builtin_cpu_supports("avx2")) return Isa::Avx2;
    return Isa::Scalar;
}

struct Workspace {
    AlignedBuf<std::uint32_t> bpack, apack;
    std::vector<std::uint32_t> scratch;
};

// C[i][0..ncols) -= sum_k A[i*K + k] * B[k][0..ncols)   (mod p)
void gemm_sub(std::uint32_t* const* C, std::size_t nrows, std::size_t ncols, const std::uint32_t* A, std::size_t K,
              const std::uint32_t* const* B, const Mod& m, Isa isa, Workspace& ws) {
    if (!nrows || !ncols || !K) return;
    if (isa == Isa::Scalar) {
        gemm_scalar(C, nrows, ncols, A, K, B, m);
        return;
    }
    const int MR = isa == Isa::Avx512 ? MR512 : MR256;
    const std::size_t NR = isa == Isa::Avx512 ? NR512 : NR256;
    auto kernel = isa == Isa::Avx512 ? kernel512 : kernel256;

    std::size_t ntiles = (ncols + NR - 1) / NR;
    ws.bpack.resize(ntiles * K * NR);
    std::uint32_t* bp = ws.bpack.ptr;
    for (std::size_t t = 0; t < ntiles; ++t) {
        std::size_t j0 = t * NR, w = std::min(NR, ncols - j0);
        std::uint32_t* dst = bp + t * K * NR;
        for (std::size_t k = 0; k < K; ++k) {
            const std::uint32_t* src = B[k] + j0;
            std::uint32_t* d = dst + k * NR;
            std::size_t j = 0;
            for (; j < w; ++j) d[j] = neg(src[j], m.p);
            for (; j < NR; ++j) d[j] = 0;
        }
    }
    ws.apack.resize(K * MR);
    ws.scratch.assign(MR * NR * 2, 0);
    std::uint32_t* tile = ws.scratch.data();

    std::size_t tiles_per_block = std::max<std::size_t>(1, (std::size_t(1) << 20) / (K * NR * 4));
    const std::size_t MB = 192;
    for (std::size_t i0 = 0; i0 < nrows; i0 += MB) {
        std::size_t i1 = std::min(nrows, i0 + MB);
        for (std::size_t t0 = 0; t0 < ntiles; t0 += tiles_per_block) {
            std::size_t t1 = std::min(ntiles, t0 + tiles_per_block);
            for (std::size_t it = i0; it < i1; it += MR) {
                int mr = static_cast<int>(std::min<std::size_t>(MR, i1 - it));
                std::uint32_t* ap = ws.apack.ptr;
                for (std::size_t k = 0; k < K; ++k)
                    for (int r = 0; r < MR; ++r) ap[k * MR + r] = r < mr ? A[(it + r) * K + k] : 0;
                std::uint32_t* rows[MR512];
                for (int r = 0; r < MR; ++r) rows[r] = r < mr ? C[it + r] : tile + MR * NR;
                for (std::size_t t = t0; t < t1; ++t) {
                    std::size_t j0 = t * NR, w = std::min(NR, ncols - j0);
                    if (w == NR && mr == MR) {
                        kernel(ap, bp + t * K * NR, K, rows, j0, m);
                        continue;
                    }
                    std::uint32_t* trows[MR512];
                    for (int r = 0; r < MR; ++r) {
                        trows[r] = tile + r * NR;
                        for (std::size_t j = 0; j < NR; ++j) trows[r][j] = (r < mr && j < w) ? rows[r][j0 + j] : 0;
                    }
                    kernel(ap, bp + t * K * NR, K, trows, 0, m);
                    for (int r = 0; r < mr; ++r)
                        for (std::size_t j = 0; j < w; ++j) rows[r][j0 + j] = trows[r][j];
                }
            }
        }
    }
}

void axpy(std::uint32_t* x, const std::uint32_t* y, std::uint32_t a, std::size_t n, const Mod& m, Isa isa) {
    if (isa == Isa::Avx512)
        axpy512(x, y, a, n, m);
    else
        axpy_scalar(x, y, a, n, m.p);
}

struct Pivots {
    std::vector<std::uint32_t*> rows;
    std::vector<std::size_t> cols;
};

// Gauss-Jordan on a handful of rows.
Pivots base_rref(const std::vector<std::uint32_t*>& rows, std::size_t W, const Mod& m, Isa isa) {
    Pivots out;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        std::uint32_t* x = rows[i];
        std::size_t c = 0;
        while (c < W && x[c] == 0) ++c;
        if (c == W) continue;
        std::uint32_t inv = invmod(x[c], m.p);
        if (inv != 1) {
            for (std::size_t j = c; j < W; ++j) x[j] = mulmod(x[j], inv, m.p);
        }
        for (std::size_t k = 0; k < rows.size(); ++k) {
            std::uint32_t* z = rows[k];
            if (z == x || z[c] == 0) continue;
            if (k < i && std::find(out.rows.begin(), out.rows.end(), z) == out.rows.end()) continue;
            axpy(z, x, neg(z[c], m.p), W, m, isa);
        }
        out.rows.push_back(x);
        out.cols.push_back(c);
    }
    return out;
}

Pivots rref(const std::vector<std::uint32_t*>& rows, std::size_t W, const Mod& m, Isa isa, Workspace& ws) {
    if (rows.size() <= 16) return base_rref(rows, W, m, isa);
    std::size_t h = rows.size() / 2;
    std::vector<std::uint32_t*> top(rows.begin(), rows.begin() + h), bot(rows.begin() + h, rows.end());
    Pivots t = rref(top, W, m, isa, ws);
    std::vector<std::uint32_t> A;
    if (!t.cols.empty()) {
        std::size_t K = t.cols.size();
        A.resize(bot.size() * K);
        for (std::size_t i = 0; i < bot.size(); ++i)
            for (std::size_t k = 0; k < K; ++k) A[i * K + k] = bot[i][t.cols[k]];
        std::vector<const std::uint32_t*> B(t.rows.begin(), t.rows.end());
        gemm_sub(bot.data(), bot.size(), W, A.data(), K, B.data(), m, isa, ws);
    }
    Pivots b = rref(bot, W, m, isa, ws);
    if (!b.cols.empty() && !t.rows.empty()) {
        std::size_t K = b.cols.size();
        A.assign(t.rows.size() * K, 0);
        for (std::size_t i = 0; i < t.rows.size(); ++i)
            for (std::size_t k = 0; k < K; ++k) A[i * K + k] = t.rows[i][b.cols[k]];
        std::vector<const std::uint32_t*> B(b.rows.begin(), b.rows.end());
        gemm_sub(t.rows.data(), t.rows.size(), W, A.data(), K, B.data(), m, isa, ws);
    }
    t.rows.insert(t.rows.end(), b.rows.begin(), b.rows.end());
    t.cols.insert(t.cols.end(), b.cols.begin(), b.cols.end());
    return t;
}

// Removes the (sorted) columns q from x[0..W).
void compact(std::uint32_t* x, std::size_t W, const std::vector<std::size_t>& q) {
    std::size_t w = q.empty() ? W : q[0];
    for (std::size_t s = 0; s < q.size(); ++s) {
        std::size_t from = q[s] + 1, to = s + 1 < q.size() ? q[s + 1] : W;
        if (to > from) std::memmove(x + w, x + from, (to - from) * sizeof(std::uint32_t));
        w += to - from;
    }
}

}  // namespace

void force_scalar_kernel(bool on) { g_force_scalar = on; }

std::string kernel_name(std::uint32_t p) {
    switch (pick_isa(make_mod(p))) {
        case Isa::Avx512: return "avx512";
        case Isa::Avx2: return "avx2";
        default: return "scalar";
    }
}

std::size_t rank_mod_p(DenseMatrix& M, std::uint32_t p, RankStats* stats, std::size_t panel_rows) {
    if (p < 2 || !is_prime_u64(p)) throw std::invalid_argument("modulus must be prime");
    auto t0 = std::chrono::steady_clock::now();
    Mod m = make_mod(p);
    Isa isa = pick_isa(m);
    std::size_t R = M.rows(), W = M.cols();
    std::size_t b = panel_rows ? panel_rows : (M.file_backed() ? 1024 : 512);
    std::size_t stride = std::max<std::size_t>(16, (W + 15) & ~std::size_t(15));
    std::vector<std::uint32_t> P(b * stride);
    Workspace ws;
    std::size_t rank = 0, base = 0, panels = 0;
    std::vector<std::uint32_t> A;
    std::vector<std::uint32_t*> trailing;

    while (base < R && W > 0) {
        std::size_t nb = std::min(b, R - base);
        std::vector<std::uint32_t*> prow(nb);
        for (std::size_t i = 0; i < nb; ++i) {
            prow[i] = P.data() + i * stride;
            std::memcpy(prow[i], M.row(base + i), W * sizeof(std::uint32_t));
        }
        Pivots pv = rref(prow, W, m, isa, ws);
        ++panels;
        std::size_t r = pv.cols.size();
        rank += r;
        base += nb;
        if (r == 0) continue;
        if (r == W) break;

        std::vector<std::size_t> order(r);
        for (std::size_t k = 0; k < r; ++k) order[k] = k;
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t c) { return pv.cols[a] < pv.cols[c]; });
        std::vector<std::size_t> q(r);
        std::vector<const std::uint32_t*> B(r);
        for (std::size_t k = 0; k < r; ++k) q[k] = pv.cols[order[k]];
        for (std::size_t k = 0; k < r; ++k) {
            compact(pv.rows[order[k]], W, q);
            B[k] = pv.rows[order[k]];
        }

        std::size_t nt = R - base;
        if (nt == 0) break;
        A.resize(nt * r);
        trailing.resize(nt);
        for (std::size_t i = 0; i < nt; ++i) {
            std::uint32_t* x = M.row(base + i);
            for (std::size_t k = 0; k < r; ++k) A[i * r + k] = x[q[k]];
            compact(x, W, q);
            trailing[i] = x;
        }
        W -= r;
        gemm_sub(trailing.data(), nt, W, A.data(), r, B.data(), m, isa, ws);
    }
    if (stats) {
        stats->seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        stats->panels = panels;
        stats->kernel = isa == Isa::Avx512 ? "avx512" : isa == Isa::Avx2 ? "avx2" : "scalar";
    }
    return rank;
}

}  // namespace shgh
