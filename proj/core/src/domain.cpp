#include "envtool/domain.hpp"

#include <charconv>
#include <cstdlib>

namespace envtool {

namespace {

void skipSpace(const std::string& s, std::size_t& i) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
}

ExcludeCond parseCond(const std::string& s, std::size_t& i) {
    skipSpace(s, i);
    if (i >= s.size() || (s[i] != 'u' && s[i] != 'v'))
        throw ConfigError("exclusion condition must start with 'u' or 'v': " + s);
    ExcludeCond c;
    c.var = s[i++];
    skipSpace(s, i);
    if (i >= s.size()) throw ConfigError("exclusion condition missing operator: " + s);
    if (s[i] == '<') {
        ++i;
        if (i < s.size() && s[i] == '=') { c.op = ExcludeCond::LE; ++i; }
        else c.op = ExcludeCond::LT;
    } else if (s[i] == '>') {
        ++i;
        if (i < s.size() && s[i] == '=') { c.op = ExcludeCond::GE; ++i; }
        else c.op = ExcludeCond::GT;
    } else if (s[i] == '=') {
        ++i;
        c.op = ExcludeCond::EQ;
    } else if (s[i] == '!' && i + 1 < s.size() && s[i + 1] == '=') {
        i += 2;
        c.op = ExcludeCond::NE;
    } else {
        throw ConfigError("bad exclusion operator in: " + s);
    }
    skipSpace(s, i);
    const char* first = s.data() + i;
    char* endp = nullptr;
    c.value = std::strtod(first, &endp);
    if (endp == first) throw ConfigError("exclusion condition missing numeric bound: " + s);
    i = static_cast<std::size_t>(endp - s.data());
    return c;
}

}  // namespace

std::vector<ExcludeClause> parseExclusions(const std::string& text) {
    std::vector<ExcludeClause> out;
    std::size_t i = 0;
    while (i < text.size()) {
        ExcludeClause clause;
        for (;;) {
            clause.push_back(parseCond(text, i));
            skipSpace(text, i);
            if (i < text.size() && text[i] == '&') { ++i; continue; }
            break;
        }
        out.push_back(std::move(clause));
        skipSpace(text, i);
        if (i < text.size()) {
            if (text[i] != ';') throw ConfigError("expected ';' between exclusion clauses: " + text);
            ++i;
            skipSpace(text, i);
        }
    }
    return out;
}

std::string printExclusions(const std::vector<ExcludeClause>& ex) {
    std::string out;
    for (std::size_t k = 0; k < ex.size(); ++k) {
        if (k) out += "; ";
        for (std::size_t c = 0; c < ex[k].size(); ++c) {
            if (c) out += " & ";
            const auto& cond = ex[k][c];
            out += cond.var;
            switch (cond.op) {
                case ExcludeCond::LT: out += "<"; break;
                case ExcludeCond::LE: out += "<="; break;
                case ExcludeCond::GT: out += ">"; break;
                case ExcludeCond::GE: out += ">="; break;
                case ExcludeCond::EQ: out += "="; break;
                case ExcludeCond::NE: out += "!="; break;
            }
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.17g", cond.value);
            out += buf;
        }
    }
    return out;
}

}  // namespace envtool
