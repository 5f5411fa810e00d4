#pragma once

#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "dualmink/body.hpp"
#include "dualmink/group.hpp"
#include "dualmink/measure.hpp"

namespace dualmink {

// Deterministic JSON document: insertion-ordered objects, numbers rendered with
// 17 significant digits so reports are reproducible and diffable.
class JsonValue {
public:
    JsonValue() : kind_(Kind::Null) {}
    static JsonValue number(double v);
    static JsonValue integer(long long v);
    static JsonValue boolean(bool v);
    static JsonValue string(std::string v);
    static JsonValue array();
    static JsonValue object();

    JsonValue& push(JsonValue v);                       // array append
    JsonValue& set(const std::string& key, JsonValue v); // object insert/overwrite

    static JsonValue vector(const Eigen::VectorXd& v);
    static JsonValue matrix(const Eigen::MatrixXd& m); // row-major nested arrays

    std::string dump(int indent = 2) const;

private:
    enum class Kind { Null, Bool, Int, Num, Str, Arr, Obj };
    Kind kind_;
    bool b_ = false;
    long long i_ = 0;
    double d_ = 0;
    std::string s_;
    std::vector<JsonValue> arr_;
    std::vector<std::pair<std::string, JsonValue>> obj_;

    void dump_to(std::string& out, int indent, int depth) const;
};

// Write-then-rename so failures never leave partial files behind.
void write_text_atomic(const std::string& path, const std::string& content);

FiniteGroup load_group(const std::string& path);
DiscreteMeasure load_measure(const std::string& path);
BodySpec load_body(const std::string& path);

JsonValue json_of_group(const FiniteGroup& g);
JsonValue json_of_measure(const DiscreteMeasure& mu);
JsonValue json_of_body(const BodySpec& b);

void save_measure(const std::string& path, const DiscreteMeasure& mu);
void save_body(const std::string& path, const BodySpec& b);

} // namespace dualmink
