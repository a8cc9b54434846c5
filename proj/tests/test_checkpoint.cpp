#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "gddq/nn/checkpoint.hpp"
#include "gddq/nn/nets.hpp"

using namespace gddq;
using namespace gddq::nn;

namespace {
std::string tmp_path(const char* name) {
    return (std::filesystem::temp_directory_path() / name).string();
}
}  // namespace

TEST_CASE("checkpoint round-trips bit-exactly") {
    RngStream rng(31);
    GeneratorConfig cfg;
    cfg.state_dim = 3;
    cfg.n_actions = 7;
    cfg.embed_width = 6;
    cfg.trunk_widths = {5};
    QuantileGenerator gen(cfg, rng);
    // make values awkward: denormals, negatives, exact powers of two
    gen.params().tensors[0].value(0, 0) = -0.0;
    gen.params().tensors[1].value(0, 0) = 1e-310;
    gen.params().tensors[2].value(0, 0) = 0.1 + 0.2;

    auto path = tmp_path("gddq_ckpt_roundtrip.bin");
    save_checkpoint(gen.params(), path);
    ParamSet loaded = load_checkpoint(path);
    REQUIRE(loaded.count() == gen.params().count());
    for (size_t i = 0; i < loaded.count(); ++i) {
        CHECK(loaded.tensors[i].name == gen.params().tensors[i].name);
        const Mat& a = loaded.tensors[i].value;
        const Mat& b = gen.params().tensors[i].value;
        REQUIRE(a.rows() == b.rows());
        REQUIRE(a.cols() == b.cols());
        for (Eigen::Index r = 0; r < a.rows(); ++r)
            for (Eigen::Index c = 0; c < a.cols(); ++c) {
                // bitwise comparison, including -0.0
                REQUIRE(std::memcmp(&a(r, c), &b(r, c), 8) == 0);
            }
    }
    std::remove(path.c_str());
}

TEST_CASE("truncated checkpoint is rejected without partial load") {
    ParamSet ps;
    ps.add("w", Mat::Constant(3, 3, 1.25));
    auto path = tmp_path("gddq_ckpt_trunc.bin");
    save_checkpoint(ps, path);
    auto size = std::filesystem::file_size(path);
    std::filesystem::resize_file(path, size - 5);
    CHECK_THROWS_AS(load_checkpoint(path), IoError);
    std::remove(path.c_str());
}

TEST_CASE("wrong magic is rejected") {
    auto path = tmp_path("gddq_ckpt_magic.bin");
    {
        std::ofstream os(path, std::ios::binary);
        os << "NOPE" << std::string(64, '\0');
    }
    CHECK_THROWS_AS(load_checkpoint(path), IoError);
    std::remove(path.c_str());
}

TEST_CASE("missing file is rejected") {
    CHECK_THROWS_AS(load_checkpoint(tmp_path("gddq_does_not_exist.bin")), IoError);
}
