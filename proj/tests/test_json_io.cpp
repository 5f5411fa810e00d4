#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "dualmink/json_io.hpp"

using namespace dualmink;

namespace {

struct TempFile {
    std::string path;
    explicit TempFile(const std::string& name)
        : path((std::filesystem::temp_directory_path() / name).string()) {}
    ~TempFile() { std::remove(path.c_str()); }
};

DiscreteMeasure sample_measure() {
    std::vector<Atom> atoms;
    atoms.push_back({UnitVector((Eigen::VectorXd(3) << 0.1, -0.2, 0.975).finished()), 0.1});
    atoms.push_back({UnitVector::axis(3, 0), 2.0 / 3.0});
    atoms.push_back({UnitVector((Eigen::VectorXd(3) << -1, -1, -1).finished()), 1e-3});
    return DiscreteMeasure::from_atoms(std::move(atoms));
}

} // namespace

TEST_CASE("measure round trip is bitwise") {
    const auto mu = sample_measure();
    TempFile f("dualmink_test_measure.json");
    save_measure(f.path, mu);
    const auto back = load_measure(f.path);
    REQUIRE(back.size() == mu.size());
    CHECK(back.ambient() == 3);
    for (std::size_t i = 0; i < mu.size(); ++i) {
        CHECK((back.atoms()[i].direction.coords() - mu.atoms()[i].direction.coords()).norm() ==
              0.0);
        CHECK(back.atoms()[i].weight == mu.atoms()[i].weight);
    }
}

TEST_CASE("body round trip is bitwise") {
    std::vector<UnitVector> normals = {
        UnitVector((Eigen::VectorXd(2) << 1, 0.3).finished()),
        UnitVector((Eigen::VectorXd(2) << -0.7, 0.3).finished()),
        UnitVector((Eigen::VectorXd(2) << 0.1, -1).finished()),
    };
    const BodySpec b(std::move(normals), (Eigen::VectorXd(3) << 0.5, 1.0 / 3.0, 0.77).finished());
    TempFile f("dualmink_test_body.json");
    save_body(f.path, b);
    const auto back = load_body(f.path);
    REQUIRE(back.facets() == 3);
    CHECK((back.support() - b.support()).norm() == 0.0);
    // Directions are re-normalized on load; that can move the last bit.
    for (int j = 0; j < 3; ++j)
        CHECK((back.normals()[j].coords() - b.normals()[j].coords()).norm() < 1e-15);
}

TEST_CASE("group round trip preserves the group") {
    Eigen::Matrix3d a = Eigen::Vector3d(1, -1, -1).asDiagonal();
    Eigen::Matrix3d c = Eigen::Vector3d(-1, 1, -1).asDiagonal();
    const auto g = FiniteGroup::close_generators({a, c});
    TempFile f("dualmink_test_group.json");
    write_text_atomic(f.path, json_of_group(g).dump());
    const auto back = load_group(f.path);
    CHECK(back.order() == g.order());
    CHECK(back.ambient() == 3);
    for (const auto& m : g.elements()) {
        bool found = false;
        for (const auto& m2 : back.elements())
            if ((m - m2).norm() < 1e-14) found = true;
        CHECK(found);
    }
}

TEST_CASE("empty generator list loads as the trivial group") {
    TempFile f("dualmink_test_trivial_group.json");
    write_text_atomic(f.path, "{\"n\": 2, \"generators\": []}\n");
    const auto g = load_group(f.path);
    CHECK(g.order() == 1);
    CHECK(g.ambient() == 2);
}

TEST_CASE("atomic write leaves no temporary behind") {
    TempFile f("dualmink_test_atomic.json");
    write_text_atomic(f.path, "{\"k\": 1}\n");
    std::ifstream in(f.path);
    std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    CHECK(content == "{\"k\": 1}\n");
    int leftovers = 0;
    for (const auto& e :
         std::filesystem::directory_iterator(std::filesystem::temp_directory_path())) {
        const auto name = e.path().filename().string();
        if (name == "dualmink_test_atomic.json.tmp") ++leftovers;
    }
    CHECK(leftovers == 0);
}

TEST_CASE("loader errors are typed") {
    CHECK_THROWS_AS(load_measure("/nonexistent/dualmink_nope.json"), InputError);
    TempFile f("dualmink_test_garbage.json");
    write_text_atomic(f.path, "this is not json");
    CHECK_THROWS_AS(load_measure(f.path), InputError);
    CHECK_THROWS_AS(load_body(f.path), InputError);
    CHECK_THROWS_AS(load_group(f.path), InputError);
    TempFile g("dualmink_test_badatom.json");
    write_text_atomic(g.path, "{\"n\": 2, \"atoms\": [{\"u\": [1, 0], \"w\": -1}]}");
    CHECK_THROWS_AS(load_measure(g.path), InputError);
}

TEST_CASE("numbers render with full precision") {
    CHECK(JsonValue::number(0.1).dump() == "0.10000000000000001");
    CHECK(JsonValue::number(1.0).dump() == "1");
    CHECK(JsonValue::integer(42).dump() == "42");
    auto obj = JsonValue::object();
    obj.set("a", JsonValue::boolean(true));
    obj.set("b", JsonValue::array().push(JsonValue::number(2.0)));
    CHECK(obj.dump(0).find("\"a\"") != std::string::npos);
}
