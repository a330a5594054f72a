#include "shgh/witness.hpp"

#include <boost/uuid/detail/sha1.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace shgh {

namespace fs = std::filesystem;

std::string sha1_hex(const std::string& data) {
    boost::uuids::detail::sha1 h;
    h.process_bytes(data.data(), data.size());
    unsigned int dg[5];
    h.get_digest(dg);
    char buf[41];
    for (int i = 0; i < 5; ++i) std::snprintf(buf + 8 * i, 9, "%08x", dg[i]);
    return std::string(buf, 40);
}

std::string canonical_system(const LinearSystem& s) {
    std::ostringstream os;
    os << s.cls.degree;
    for (const auto& pt : s.cfg.points()) {
        os << ';' << pt.label << ':' << (pt.parent ? *pt.parent : std::string()) << ':'
           << s.cls.mult(pt.label);
    }
    return os.str();
}

std::string witness_key(const LinearSystem& s, std::uint32_t p, std::uint64_t seed, bool frame) {
    std::ostringstream os;
    os << "rank-witness-v1|" << canonical_system(s) << '|' << p << '|' << seed << '|' << (frame ? 1 : 0);
    return sha1_hex(os.str());
}

std::string witness_path(const std::string& dir, const std::string& key) {
    return (fs::path(dir) / (key + ".json")).string();
}

std::optional<nlohmann::json> load_witness(const std::string& dir, const std::string& key) {
    if (dir.empty()) return std::nullopt;
    std::ifstream in(witness_path(dir, key));
    if (!in) return std::nullopt;
    try {
        nlohmann::json j;
        in >> j;
        return j;
    } catch (const std::exception&) {
        return std::nullopt;  // half-written file; recompute
    }
}

std::string store_witness(const std::string& dir, const std::string& key, const nlohmann::json& j) {
    fs::create_directories(dir);
    std::string path = witness_path(dir, key);
    std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp);
        out << j.dump(2) << '\n';
    }
    fs::rename(tmp, path);
    return path;
}

}  // namespace shgh
