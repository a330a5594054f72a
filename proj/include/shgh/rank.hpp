#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

namespace shgh {

struct StorageOptions {
    std::size_t ram_budget = 0;  // bytes; 0 = 60% of physical memory
    std::string spill_dir;       // where file-backed matrices live; empty = /tmp
};

// Row-major uint32 matrix. Large instances are backed by an unlinked file
// mapping instead of anonymous memory.
class DenseMatrix {
public:
    DenseMatrix() = default;
    DenseMatrix(std::size_t rows, std::size_t cols, const StorageOptions& opt = {});
    ~DenseMatrix();
    DenseMatrix(DenseMatrix&& o) noexcept;
    DenseMatrix& operator=(DenseMatrix&& o) noexcept;
    DenseMatrix(const DenseMatrix&) = delete;
    DenseMatrix& operator=(const DenseMatrix&) = delete;

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t stride() const { return stride_; }
    bool file_backed() const { return mapped_; }
    std::uint32_t* row(std::size_t i) { return data_ + i * stride_; }
    const std::uint32_t* row(std::size_t i) const { return data_ + i * stride_; }
    std::uint32_t& at(std::size_t i, std::size_t j) { return data_[i * stride_ + j]; }
    std::uint32_t at(std::size_t i, std::size_t j) const { return data_[i * stride_ + j]; }

private:
    void release();
    std::size_t rows_ = 0, cols_ = 0, stride_ = 0, bytes_ = 0;
    std::uint32_t* data_ = nullptr;
    bool mapped_ = false;
};

std::size_t physical_memory();

struct RankStats {
    double seconds = 0;
    std::size_t panels = 0;
    std::string kernel;
};

// Destroys M. Entries must already be reduced mod p; requires p < 2^32.
std::size_t rank_mod_p(DenseMatrix& M, std::uint32_t p, RankStats* stats = nullptr, std::size_t panel_rows = 0);

// Name of the multiply kernel that rank_mod_p would use for p.
std::string kernel_name(std::uint32_t p);

// Forces the portable kernel (tests compare it against the vector kernels).
void force_scalar_kernel(bool on);

}  // namespace shgh
