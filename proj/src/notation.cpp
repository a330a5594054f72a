#include "shgh/notation.hpp"

#include <cctype>

namespace shgh {

namespace {

struct Parser {
    const std::string& s;
    std::size_t i = 0;

    void ws() {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    }
    bool eat(char c) {
        ws();
        if (i < s.size() && s[i] == c) {
            ++i;
            return true;
        }
        return false;
    }
    void expect(char c) {
        if (!eat(c)) throw ParseError(std::string("expected '") + c + "'", i);
    }
    bool at_end() {
        ws();
        return i >= s.size();
    }
    Int integer() {
        ws();
        std::size_t start = i;
        bool neg = false;
        if (i < s.size() && (s[i] == '-' || s[i] == '+')) {
            neg = s[i] == '-';
            ++i;
        }
        std::size_t digits = i;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
        if (i == digits) throw ParseError("expected integer", start);
        Int v(s.substr(digits, i - digits));
        return neg ? Int(-v) : v;
    }
    std::size_t repeat() {
        if (!eat('^')) return 1;
        std::size_t at = i;
        Int k = integer();
        if (k < 1) throw ParseError("repeat count must be positive", at);
        if (k > 100000) throw ParseError("repeat count too large", at);
        return static_cast<std::size_t>(k);
    }
};

}  // namespace

LinearSystem parse_system(const std::string& text) {
    Parser p{text};
    bool wrapped = false;
    p.ws();
    if (p.i < text.size() && text[p.i] == 'L') {
        ++p.i;
        p.expect('(');
        wrapped = true;
    }
    LinearSystem out;
    out.cls.degree = p.integer();
    std::size_t next = 1;
    auto add_entry = [&](const std::vector<Int>& chain) {
        std::string base = "p" + std::to_string(next++);
        std::string label = base;
        out.cfg.add_free(label);
        out.cls.mults.emplace_back(label, chain[0]);
        for (std::size_t j = 1; j < chain.size(); ++j) {
            std::string child = base + std::string(j, '\'');
            out.cfg.add_child(child, label);
            out.cls.mults.emplace_back(child, chain[j]);
            label = child;
        }
    };
    if (p.eat(';')) {
        do {
            std::vector<Int> chain;
            if (p.eat('[')) {
                chain.push_back(p.integer());
                while (p.eat(',')) chain.push_back(p.integer());
                p.expect(']');
                if (chain.size() < 2) throw ParseError("compound point needs two entries", p.i);
            } else {
                chain.push_back(p.integer());
            }
            std::size_t k = p.repeat();
            for (std::size_t r = 0; r < k; ++r) add_entry(chain);
        } while (p.eat(','));
    }
    if (wrapped) p.expect(')');
    if (!p.at_end()) throw ParseError("unexpected character", p.i);
    return out;
}

std::string render_system(const LinearSystem& s) {
    check_labels(s.cls, s.cfg);
    std::vector<std::string> entries;
    for (const auto& pt : s.cfg.points()) {
        if (pt.parent) continue;
        std::vector<std::string> chain{int_str(s.cls.mult(pt.label))};
        std::string cur = pt.label;
        for (;;) {
            auto ch = s.cfg.children(cur);
            if (ch.empty()) break;
            if (ch.size() > 1) throw ConfigurationMismatch("cannot render branching cluster at " + cur);
            cur = ch[0];
            chain.push_back(int_str(s.cls.mult(cur)));
        }
        if (chain.size() == 1) {
            entries.push_back(chain[0]);
        } else {
            std::string e = "[";
            for (std::size_t j = 0; j < chain.size(); ++j) e += (j ? "," : "") + chain[j];
            entries.push_back(e + "]");
        }
    }
    std::string out = int_str(s.cls.degree);
    if (entries.empty()) return out;
    out += "; ";
    for (std::size_t j = 0; j < entries.size();) {
        std::size_t k = j + 1;
        while (k < entries.size() && entries[k] == entries[j]) ++k;
        if (j) out += ", ";
        out += entries[j];
        if (k - j > 1) out += "^" + std::to_string(k - j);
        j = k;
    }
    return out;
}

}  // namespace shgh
