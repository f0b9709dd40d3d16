#pragma once

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "tqp/coset.hpp"
#include "tqp/error.hpp"
#include "tqp/integer.hpp"

namespace tqp::io {

namespace detail {

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

inline bool is_integer_token(const std::string& tok) {
    std::size_t i = (tok[0] == '-' || tok[0] == '+') ? 1 : 0;
    if (i == tok.size()) return false;
    for (; i < tok.size(); ++i)
        if (tok[i] < '0' || tok[i] > '9') return false;
    return true;
}

struct Field {
    std::vector<Integer> values;
    std::size_t line;
};

inline std::vector<Integer> take(const std::map<std::string, Field>& fields, const std::string& key, std::size_t arity,
                                 std::size_t last_line) {
    const auto it = fields.find(key);
    if (it == fields.end())
        fail(ErrorKind::Parse, "line " + std::to_string(last_line) + ": missing key '" + key + "'");
    if (it->second.values.size() != arity)
        fail(ErrorKind::Parse, "line " + std::to_string(it->second.line) + ": '" + key + "' needs " +
                                   std::to_string(arity) + " integers, got " + std::to_string(it->second.values.size()));
    return it->second.values;
}

}  // namespace detail

/// Parses the line-oriented `key = value` instance format; errors name the offending line.
inline InstanceDescription parse_instance(const std::string& text) {
    std::map<std::string, detail::Field> fields;
    std::string form;
    std::size_t form_line = 0, line_no = 0;
    std::istringstream in(text);
    std::string raw;
    while (std::getline(in, raw)) {
        ++line_no;
        const auto hash = raw.find('#');
        const std::string line = detail::trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (line.empty()) continue;
        const auto eq = line.find('=');
        const auto where = "line " + std::to_string(line_no) + ": ";
        if (eq == std::string::npos) fail(ErrorKind::Parse, where + "expected 'key = value'");
        const std::string key = detail::trim(line.substr(0, eq));
        const std::string value = detail::trim(line.substr(eq + 1));
        if (key.empty()) fail(ErrorKind::Parse, where + "empty key");
        if (key == "form") {
            if (!form.empty()) fail(ErrorKind::Parse, where + "duplicate key 'form'");
            if (value != "polynomial" && value != "lattice")
                fail(ErrorKind::Parse, where + "form must be 'polynomial' or 'lattice', got '" + value + "'");
            form = value;
            form_line = line_no;
            continue;
        }
        if (key != "quadratic" && key != "linear" && key != "constant" && key != "gram" && key != "w")
            fail(ErrorKind::Parse, where + "unknown key '" + key + "'");
        if (fields.count(key)) fail(ErrorKind::Parse, where + "duplicate key '" + key + "'");
        detail::Field f{{}, line_no};
        std::istringstream vs(value);
        std::string tok;
        while (vs >> tok) {
            if (!detail::is_integer_token(tok)) fail(ErrorKind::Parse, where + "'" + tok + "' is not an integer");
            f.values.emplace_back(tok[0] == '+' ? tok.substr(1) : tok);
        }
        fields.emplace(key, std::move(f));
    }
    if (form.empty()) fail(ErrorKind::Parse, "line " + std::to_string(line_no) + ": missing key 'form'");

    const std::vector<std::string> allowed =
        form == "polynomial" ? std::vector<std::string>{"quadratic", "linear", "constant"} : std::vector<std::string>{"gram", "w"};
    for (const auto& [key, f] : fields)
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
            fail(ErrorKind::Parse, "line " + std::to_string(f.line) + ": key '" + key + "' does not belong to form " + form +
                                       " (declared on line " + std::to_string(form_line) + ")");

    if (form == "polynomial") {
        const auto q = detail::take(fields, "quadratic", 6, line_no);
        const auto l = detail::take(fields, "linear", 3, line_no);
        PolynomialInput p;
        std::copy(q.begin(), q.end(), p.quadratic.begin());
        std::copy(l.begin(), l.end(), p.linear.begin());
        if (fields.count("constant")) p.constant = detail::take(fields, "constant", 1, line_no)[0];
        return p;
    }
    const auto g = detail::take(fields, "gram", 6, line_no);
    const auto w = detail::take(fields, "w", 3, line_no);
    try {
        return LatticeInput{GramMatrix::from_upper(g), w, 0};
    } catch (const Error& e) {
        fail(ErrorKind::Parse, "line " + std::to_string(fields.at("gram").line) + ": " + e.what());
    }
}

inline InstanceDescription read_instance_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) fail(ErrorKind::Parse, "cannot open instance file '" + path + "'");
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse_instance(ss.str());
}

namespace detail {
inline std::string join(const std::vector<Integer>& v) {
    std::string out;
    for (const auto& x : v) out += (out.empty() ? "" : " ") + x.str();
    return out;
}
}  // namespace detail

inline std::string write_instance(const LatticeInput& in, const std::string& comment = "") {
    std::string out;
    if (!comment.empty()) out += "# " + comment + "\n";
    out += "form = lattice\n";
    out += "gram = " + detail::join(in.gram.upper()) + "\n";
    out += "w = " + detail::join(in.w) + "\n";
    return out;
}

inline std::string write_instance(const PolynomialInput& in, const std::string& comment = "") {
    std::string out;
    if (!comment.empty()) out += "# " + comment + "\n";
    out += "form = polynomial\n";
    out += "quadratic = " + detail::join({in.quadratic.begin(), in.quadratic.end()}) + "\n";
    out += "linear = " + detail::join({in.linear.begin(), in.linear.end()}) + "\n";
    out += "constant = " + in.constant.str() + "\n";
    return out;
}

inline std::string write_instance(const InstanceDescription& in, const std::string& comment = "") {
    return std::visit([&](const auto& v) { return write_instance(v, comment); }, in);
}

}  // namespace tqp::io
