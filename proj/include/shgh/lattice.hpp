#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include "json.hpp"

#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "shgh/errors.hpp"

namespace shgh {

using Int = boost::multiprecision::cpp_int;

struct PointNode {
    std::string label;
    std::optional<std::string> parent;  // first-order infinitely near to parent
};

class Configuration {
public:
    Configuration() = default;

    static Configuration free_points(std::size_t k, const std::string& prefix = "p");

    void add_free(const std::string& label);
    void add_child(const std::string& label, const std::string& parent);

    const std::vector<PointNode>& points() const { return pts_; }
    std::size_t size() const { return pts_.size(); }
    bool contains(const std::string& label) const { return idx_.count(label) > 0; }
    std::size_t index_of(const std::string& label) const;
    const PointNode& node(const std::string& label) const { return pts_[index_of(label)]; }
    bool is_free(const std::string& label) const { return !node(label).parent; }
    int depth(const std::string& label) const;
    std::vector<std::string> children(const std::string& label) const;
    std::vector<std::string> labels() const;

    bool operator==(const Configuration& o) const;

private:
    std::vector<PointNode> pts_;
    std::unordered_map<std::string, std::size_t> idx_;
};

// d H - sum m_i E_i in the total-transform basis. Labels not listed carry 0.
struct DivisorClass {
    Int degree = 0;
    std::vector<std::pair<std::string, Int>> mults;

    DivisorClass() = default;
    explicit DivisorClass(Int d) : degree(std::move(d)) {}
    DivisorClass(Int d, std::vector<std::pair<std::string, Int>> m)
        : degree(std::move(d)), mults(std::move(m)) {}

    Int mult(const std::string& label) const;
    void set(const std::string& label, const Int& m);
    void add(const std::string& label, const Int& m);

    // E_label with the sign convention of the basis: degree 0, mult -1.
    static DivisorClass exceptional(const std::string& label);

    DivisorClass& operator+=(const DivisorClass& o);
    DivisorClass& operator-=(const DivisorClass& o);
    DivisorClass operator+(const DivisorClass& o) const { DivisorClass r = *this; r += o; return r; }
    DivisorClass operator-(const DivisorClass& o) const { DivisorClass r = *this; r -= o; return r; }
    DivisorClass operator-() const;
    friend DivisorClass operator*(const Int& t, const DivisorClass& c);

    bool operator==(const DivisorClass& o) const;
    bool operator!=(const DivisorClass& o) const { return !(*this == o); }

    // entries reordered to cfg order, zeros included for every cfg label
    DivisorClass aligned(const Configuration& cfg) const;
    std::size_t nonzero_count() const;
};

// A class together with the configuration it lives over.
struct LinearSystem {
    Configuration cfg;
    DivisorClass cls;
};

LinearSystem homogeneous(const Int& d, const Int& m, std::size_t k);
LinearSystem make_system(const Int& d, const std::vector<Int>& mults);

void check_labels(const DivisorClass& a, const Configuration& cfg);

Int pair(const DivisorClass& a, const DivisorClass& b, const Configuration& cfg);
Int pair(const DivisorClass& a, const DivisorClass& b);  // unchecked
Int self_int(const DivisorClass& a);

DivisorClass canonical_class(const Configuration& cfg);
Int virtual_dim(const DivisorClass& L);
Int expected_dim(const DivisorClass& L);

struct NegClass {
    DivisorClass cls;
    int self_int;
    Int pairing;
};

struct NegClassReport {
    std::vector<NegClass> classes;
    int degree_bound_used = 0;
    bool complete = false;
    std::string justification;
};

// Bounded enumeration of classes with C^2 = target, C.K = -2 - target.
// `complete` is only set when a justification tag is supplied.
NegClassReport enumerate_negative_classes(const Configuration& cfg, const DivisorClass& L,
                                          int degree_bound, int target_self_int,
                                          const std::string& justification = "");

struct NefVerdict {
    bool nef = true;
    std::optional<NegClass> witness;
};

// Checks (-1)-classes up to degree_bound and the (-2)-classes E_p - E_c of
// infinitely near pairs.
NefVerdict is_nef_bounded(const DivisorClass& L, const Configuration& cfg, int degree_bound);

std::string int_str(const Int& v);
nlohmann::json int_json(const Int& v);
Int int_from_json(const nlohmann::json& j);

nlohmann::json to_json(const Configuration& cfg);
nlohmann::json to_json(const DivisorClass& c, const Configuration& cfg);
LinearSystem system_from_json(const nlohmann::json& j);

}  // namespace shgh
