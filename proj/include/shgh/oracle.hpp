#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "shgh/lattice.hpp"
#include "shgh/rank.hpp"

namespace shgh {

struct ConfigFp {
    std::uint32_t p = 0;
    std::uint64_t seed = 0;
    std::map<std::string, std::pair<std::uint32_t, std::uint32_t>> coords;  // free points
    std::map<std::string, std::uint32_t> directions;                        // infinitely near points
};

ConfigFp sample_config(const Configuration& cfg, std::uint32_t p, std::uint64_t seed);

struct RowOrigin {
    std::string label;
    int i = 0, j = 0;  // Taylor index at a free point, or (u, w) chart index
    bool chart = false;
};

enum class FramePos { Origin, XInfinity, YInfinity };

struct BuildOptions {
    bool frame = true;  // first three childless free points go to [0:0:1], [1:0:0], [0:1:0]
    StorageOptions storage;
};

struct ConditionMatrix {
    int d = 0;
    std::uint32_t p = 0;
    std::size_t ncols = 0;                   // (d+1)(d+2)/2
    std::size_t nrows = 0;                   // all conditions, frame rows included
    std::set<std::size_t> unit_cols;         // columns killed by frame rows
    std::vector<std::size_t> dense_cols;     // remaining columns, ascending
    DenseMatrix dense;                       // rows = non-frame conditions on dense_cols
    std::vector<RowOrigin> provenance;       // frame rows first, then dense rows in order
    std::map<std::string, FramePos> frame;
};

std::size_t column_index(int d, int a, int b);  // monomial x^a y^b

ConditionMatrix build_matrix(const LinearSystem& s, const ConfigFp& cfg, const BuildOptions& opt = {});

// Dense materialization of every row over all columns (small instances and tests).
std::vector<std::vector<std::uint32_t>> full_rows(const LinearSystem& s, const ConfigFp& cfg, bool frame);

std::size_t matrix_rank(ConditionMatrix& M, RankStats* stats = nullptr);

enum class CertStatus { CERTIFIED_NONSPECIAL, CERTIFIED_EMPTY, UPPER_BOUND_ONLY, INCONCLUSIVE };
std::string to_string(CertStatus s);

struct Witness {
    std::uint32_t p = 0;
    std::uint64_t seed = 0;
    bool frame = true;
    std::size_t rank = 0, rows = 0, cols = 0;
    long long dim = 0;
    double seconds = 0;
    bool cached = false;
    std::string path;
};

struct CertifiedDim {
    Int dim = -1;
    Int expected = -1;
    CertStatus status = CertStatus::INCONCLUSIVE;
    std::size_t trials_used = 0;
    std::vector<Witness> witnesses;  // one per trial actually run
    Witness best;
    std::string note;
};

struct OracleOptions {
    std::uint32_t p = 2147483647u;
    std::size_t trials = 3;
    std::uint64_t seed = 1;
    bool frame = true;
    std::string cache_dir;  // empty = no cache
    bool use_cache = true;
    StorageOptions storage;
};

CertifiedDim generic_dim(const LinearSystem& s, const OracleOptions& opt);

// Two primes, fresh seeds; INCONCLUSIVE when the expected dimension is never reached.
CertifiedDim certify_nonspecial(const LinearSystem& s, OracleOptions opt,
                                const std::vector<std::uint32_t>& primes = {});

}  // namespace shgh
