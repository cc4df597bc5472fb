#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "hitcast/dataset.hpp"
#include "hitcast/errors.hpp"

using namespace hitcast;
namespace fs = std::filesystem;

namespace {

Dataset tiny_dataset(Dataset::Storage storage = Dataset::Storage::dense) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    std::vector<InstanceId> instances{
        {SongKey{"a", "one"}, std::nullopt},
        {SongKey{"b", "two"}, Date::parse("2013-07-01")},
        {SongKey{"c", "three"}, std::nullopt},
    };
    std::vector<SparseRow> rows{
        {{0, 1.0}, {2, 3.0}},
        {{1, -2.5}},
        {{0, 4.0}, {1, storage == Dataset::Storage::dense ? nan : 7.0}, {2, 0.5}},
    };
    return Dataset::make("tiny", std::move(instances), {"f0", "f1", "f2"}, {1, 0, 1},
                         std::move(rows), storage);
}

} // namespace

TEST_CASE("dataset shape validation") {
    CHECK_THROWS_AS(Dataset::make("x", {}, {"f"}, {0}, {}, Dataset::Storage::dense), DataError);
    CHECK_THROWS_AS(Dataset::make("x", {{SongKey{"a", "b"}, std::nullopt}}, {"f", "f"}, {0},
                                  {{{0, 1.0}}}, Dataset::Storage::dense),
                    DataError);
    CHECK_THROWS_AS(Dataset::make("x", {{SongKey{"a", "b"}, std::nullopt}}, {"f"}, {2},
                                  {{{0, 1.0}}}, Dataset::Storage::dense),
                    DataError);
    CHECK_THROWS_AS(Dataset::make("x", {{SongKey{"a", "b"}, std::nullopt}}, {"f"}, {0},
                                  {{{0, std::numeric_limits<double>::infinity()}}},
                                  Dataset::Storage::dense),
                    DataError);
    CHECK_THROWS_AS(Dataset::make("x", {{SongKey{"a", "b"}, std::nullopt}}, {"f"}, {0},
                                  {{{1, 1.0}}}, Dataset::Storage::dense),
                    DataError);
}

TEST_CASE("dataset cells and dense rows") {
    const Dataset d = tiny_dataset();
    CHECK(d.cell(0, 0) == 1.0);
    CHECK(d.cell(0, 1) == 0.0);
    CHECK(d.cell(1, 1) == -2.5);
    CHECK(std::isnan(d.cell(2, 1)));
    CHECK(d.missing_count() == 1);
    CHECK(d.positives() == 2);
    CHECK(d.negatives() == 1);

    std::vector<double> row(3);
    d.fill_dense_row(0, row);
    CHECK(row == std::vector<double>{1.0, 0.0, 3.0});
}

TEST_CASE("dataset save/load round trips") {
    for (const auto storage : {Dataset::Storage::dense, Dataset::Storage::sparse}) {
        const Dataset d = tiny_dataset(storage);
        const std::string dir =
            storage == Dataset::Storage::dense ? "ds_dense_test" : "ds_sparse_test";
        d.save(dir);
        const Dataset loaded = Dataset::load(dir);
        CHECK(loaded.name() == d.name());
        CHECK(loaded.n_rows() == d.n_rows());
        CHECK(loaded.feature_names() == d.feature_names());
        CHECK(loaded.labels() == d.labels());
        CHECK(loaded.instances() == d.instances());
        CHECK(loaded.digest() == d.digest());
        CHECK(loaded.missing_count() == d.missing_count());
        fs::remove_all(dir);
    }
}

TEST_CASE("sparse serialization refuses missing markers") {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    Dataset d = Dataset::make("x",
                              {{SongKey{"a", "b"}, std::nullopt}, {SongKey{"c", "d"}, std::nullopt}},
                              {"f"}, {0, 1}, {{{0, nan}}, {{0, 1.0}}}, Dataset::Storage::sparse);
    CHECK_THROWS_AS(d.save("ds_bad_test"), InternalError);
    fs::remove_all("ds_bad_test");
}

TEST_CASE("filter_features") {
    const Dataset d = tiny_dataset();

    // empty drop set: identity
    const Dataset same = filter_features(d, {});
    CHECK(same.feature_names() == d.feature_names());
    CHECK(same.digest() == d.digest());

    const Dataset dropped = filter_features(d, {"f1"});
    CHECK(dropped.feature_names() == std::vector<std::string>{"f0", "f2"});
    CHECK(dropped.n_rows() == 3);
    CHECK(dropped.labels() == d.labels());
    CHECK(dropped.instances() == d.instances());
    CHECK(dropped.cell(0, 1) == 3.0);  // old f2 shifted left
    CHECK(dropped.cell(1, 0) == 0.0);
    CHECK(dropped.missing_count() == 0);

    CHECK_THROWS_AS(filter_features(d, {"nope"}), DataError);
    CHECK_THROWS_AS(filter_features(d, {"f0", "f1", "f2"}), DataError);
}

TEST_CASE("digest reacts to content changes") {
    const Dataset a = tiny_dataset();
    Dataset b = tiny_dataset();
    CHECK(a.digest() == b.digest());
    const Dataset c = filter_features(a, {"f0"});
    CHECK(a.digest() != c.digest());
}
