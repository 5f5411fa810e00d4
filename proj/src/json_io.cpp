#include "dualmink/json_io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace dualmink {

namespace {

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void escape_string(const std::string& s, std::string& out) {
    out += '"';
    for (const char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            case '\r': out += "\\r"; break;
            default:
                if (static_cast<unsigned char>(c) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof(buf), "\\u%04x", c);
                    out += buf;
                } else {
                    out += c;
                }
        }
    }
    out += '"';
}

} // namespace

JsonValue JsonValue::number(double v) {
    JsonValue j;
    j.kind_ = Kind::Num;
    j.d_ = v;
    return j;
}

JsonValue JsonValue::integer(long long v) {
    JsonValue j;
    j.kind_ = Kind::Int;
    j.i_ = v;
    return j;
}

JsonValue JsonValue::boolean(bool v) {
    JsonValue j;
    j.kind_ = Kind::Bool;
    j.b_ = v;
    return j;
}

JsonValue JsonValue::string(std::string v) {
    JsonValue j;
    j.kind_ = Kind::Str;
    j.s_ = std::move(v);
    return j;
}

JsonValue JsonValue::array() {
    JsonValue j;
    j.kind_ = Kind::Arr;
    return j;
}

JsonValue JsonValue::object() {
    JsonValue j;
    j.kind_ = Kind::Obj;
    return j;
}

JsonValue& JsonValue::push(JsonValue v) {
    if (kind_ != Kind::Arr) throw InputError("JsonValue::push on a non-array");
    arr_.push_back(std::move(v));
    return *this;
}

JsonValue& JsonValue::set(const std::string& key, JsonValue v) {
    if (kind_ != Kind::Obj) throw InputError("JsonValue::set on a non-object");
    for (auto& kv : obj_) {
        if (kv.first == key) {
            kv.second = std::move(v);
            return *this;
        }
    }
    obj_.emplace_back(key, std::move(v));
    return *this;
}

JsonValue JsonValue::vector(const Eigen::VectorXd& v) {
    JsonValue j = array();
    for (Eigen::Index i = 0; i < v.size(); ++i) j.push(number(v(i)));
    return j;
}

JsonValue JsonValue::matrix(const Eigen::MatrixXd& m) {
    JsonValue j = array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        JsonValue row = array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push(number(m(r, c)));
        j.push(std::move(row));
    }
    return j;
}

void JsonValue::dump_to(std::string& out, int indent, int depth) const {
    const std::string pad(static_cast<std::size_t>(indent * (depth + 1)), ' ');
    const std::string close_pad(static_cast<std::size_t>(indent * depth), ' ');
    switch (kind_) {
        case Kind::Null: out += "null"; break;
        case Kind::Bool: out += b_ ? "true" : "false"; break;
        case Kind::Int: out += std::to_string(i_); break;
        case Kind::Num: out += format_double(d_); break;
        case Kind::Str: escape_string(s_, out); break;
        case Kind::Arr: {
            if (arr_.empty()) {
                out += "[]";
                break;
            }
            bool scalars = true;
            for (const auto& v : arr_) {
                if (v.kind_ == Kind::Arr || v.kind_ == Kind::Obj) scalars = false;
            }
            out += '[';
            for (std::size_t i = 0; i < arr_.size(); ++i) {
                if (!scalars) {
                    out += '\n';
                    out += pad;
                } else if (i > 0) {
                    out += ' ';
                }
                arr_[i].dump_to(out, indent, depth + 1);
                if (i + 1 < arr_.size()) out += ',';
            }
            if (!scalars) {
                out += '\n';
                out += close_pad;
            }
            out += ']';
            break;
        }
        case Kind::Obj: {
            if (obj_.empty()) {
                out += "{}";
                break;
            }
            out += '{';
            for (std::size_t i = 0; i < obj_.size(); ++i) {
                out += '\n';
                out += pad;
                escape_string(obj_[i].first, out);
                out += ": ";
                obj_[i].second.dump_to(out, indent, depth + 1);
                if (i + 1 < obj_.size()) out += ',';
            }
            out += '\n';
            out += close_pad;
            out += '}';
            break;
        }
    }
}

std::string JsonValue::dump(int indent) const {
    std::string out;
    dump_to(out, indent, 0);
    return out;
}

void write_text_atomic(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw InputError("cannot open for writing: " + tmp);
        f << content;
        if (!f.good()) throw InputError("write failed: " + tmp);
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw InputError("rename failed for: " + path);
    }
}

namespace {

nlohmann::json parse_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw InputError("cannot open: " + path);
    try {
        return nlohmann::json::parse(f);
    } catch (const nlohmann::json::exception& e) {
        throw InputError("invalid JSON in " + path + ": " + e.what());
    }
}

int require_dimension(const nlohmann::json& j, const std::string& path) {
    if (!j.is_object() || !j.contains("n") || !j["n"].is_number_integer()) {
        throw InputError(path + ": missing integer field \"n\"");
    }
    const int n = j["n"].get<int>();
    if (n < 1 || n > 64) throw InputError(path + ": implausible ambient dimension");
    return n;
}

Eigen::VectorXd read_vector(const nlohmann::json& j, int n, const std::string& what) {
    if (!j.is_array() || static_cast<int>(j.size()) != n) {
        throw InputError(what + ": expected an array of length n");
    }
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) {
        if (!j[static_cast<std::size_t>(i)].is_number()) {
            throw InputError(what + ": non-numeric entry");
        }
        v(i) = j[static_cast<std::size_t>(i)].get<double>();
    }
    return v;
}

} // namespace

FiniteGroup load_group(const std::string& path) {
    const nlohmann::json j = parse_file(path);
    const int n = require_dimension(j, path);
    if (!j.contains("generators") || !j["generators"].is_array()) {
        throw InputError(path + ": missing array field \"generators\"");
    }
    std::vector<Eigen::MatrixXd> gens;
    for (const auto& gj : j["generators"]) {
        if (!gj.is_array() || static_cast<int>(gj.size()) != n) {
            throw InputError(path + ": generator is not an n x n matrix");
        }
        Eigen::MatrixXd g(n, n);
        for (int r = 0; r < n; ++r) {
            g.row(r) = read_vector(gj[static_cast<std::size_t>(r)], n, path + ": generator row").transpose();
        }
        gens.push_back(std::move(g));
    }
    return FiniteGroup::close_generators(gens.empty() ? std::vector<Eigen::MatrixXd>{Eigen::MatrixXd::Identity(n, n)}
                                                      : gens);
}

DiscreteMeasure load_measure(const std::string& path) {
    const nlohmann::json j = parse_file(path);
    const int n = require_dimension(j, path);
    if (!j.contains("atoms") || !j["atoms"].is_array() || j["atoms"].empty()) {
        throw InputError(path + ": missing nonempty array field \"atoms\"");
    }
    std::vector<Atom> atoms;
    for (const auto& aj : j["atoms"]) {
        if (!aj.is_object() || !aj.contains("u") || !aj.contains("w") || !aj["w"].is_number()) {
            throw InputError(path + ": atom must be {\"u\": [...], \"w\": real}");
        }
        const double w = aj["w"].get<double>();
        if (!(w > 0) || !std::isfinite(w)) throw InputError(path + ": atom weight must be positive");
        atoms.push_back({UnitVector(read_vector(aj["u"], n, path + ": atom direction")), w});
    }
    return DiscreteMeasure::from_atoms(std::move(atoms));
}

BodySpec load_body(const std::string& path) {
    const nlohmann::json j = parse_file(path);
    const int n = require_dimension(j, path);
    if (!j.contains("normals") || !j["normals"].is_array() || j["normals"].empty()) {
        throw InputError(path + ": missing nonempty array field \"normals\"");
    }
    if (!j.contains("h") || !j["h"].is_array() || j["h"].size() != j["normals"].size()) {
        throw InputError(path + ": field \"h\" must match \"normals\" in length");
    }
    std::vector<UnitVector> normals;
    for (const auto& nj : j["normals"]) {
        normals.emplace_back(read_vector(nj, n, path + ": normal"));
    }
    Eigen::VectorXd h(static_cast<Eigen::Index>(normals.size()));
    for (std::size_t i = 0; i < normals.size(); ++i) {
        if (!j["h"][i].is_number()) throw InputError(path + ": non-numeric support entry");
        h(static_cast<Eigen::Index>(i)) = j["h"][i].get<double>();
    }
    return BodySpec(std::move(normals), std::move(h));
}

JsonValue json_of_group(const FiniteGroup& g) {
    JsonValue j = JsonValue::object();
    j.set("n", JsonValue::integer(g.ambient()));
    JsonValue elems = JsonValue::array();
    for (const auto& e : g.elements()) elems.push(JsonValue::matrix(e));
    j.set("order", JsonValue::integer(static_cast<long long>(g.order())));
    j.set("generators", std::move(elems));
    return j;
}

JsonValue json_of_measure(const DiscreteMeasure& mu) {
    JsonValue j = JsonValue::object();
    j.set("n", JsonValue::integer(mu.ambient()));
    JsonValue atoms = JsonValue::array();
    for (const auto& a : mu.atoms()) {
        JsonValue aj = JsonValue::object();
        aj.set("u", JsonValue::vector(a.direction.coords()));
        aj.set("w", JsonValue::number(a.weight));
        atoms.push(std::move(aj));
    }
    j.set("atoms", std::move(atoms));
    return j;
}

JsonValue json_of_body(const BodySpec& b) {
    JsonValue j = JsonValue::object();
    j.set("n", JsonValue::integer(b.ambient()));
    JsonValue normals = JsonValue::array();
    for (const auto& v : b.normals()) normals.push(JsonValue::vector(v.coords()));
    j.set("normals", std::move(normals));
    j.set("h", JsonValue::vector(b.support()));
    return j;
}

void save_measure(const std::string& path, const DiscreteMeasure& mu) {
    write_text_atomic(path, json_of_measure(mu).dump() + "\n");
}

void save_body(const std::string& path, const BodySpec& b) {
    write_text_atomic(path, json_of_body(b).dump() + "\n");
}

} // namespace dualmink
