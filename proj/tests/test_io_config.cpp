#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "superrad/config.hpp"
#include "superrad/io.hpp"

using namespace superrad;

namespace {

std::filesystem::path temp_file(const std::string& name)
{
    const auto dir = std::filesystem::temp_directory_path() / "superrad_io_tests";
    std::filesystem::create_directories(dir);
    return dir / name;
}

} // namespace

TEST_CASE("double formatting round-trips exactly")
{
    for (double v : {3.141592653589793, 1.0 / 3.0, 1e-300, -2.5e17, 0.0}) {
        const std::string s = fmt_double(v);
        REQUIRE(std::stod(s) == v);
    }
}

TEST_CASE("csv writer emits comment headers and rows")
{
    const auto path = temp_file("writer.csv");
    {
        CsvWriter csv(path.string(), {"config: test", "units: none"}, {"a", "b"});
        csv.write_row({1.5, -2.0});
        csv.write_row({0.25, 1e-12});
    }
    std::ifstream in(path);
    std::string l1, l2, l3, l4, l5;
    std::getline(in, l1);
    std::getline(in, l2);
    std::getline(in, l3);
    std::getline(in, l4);
    std::getline(in, l5);
    REQUIRE(l1 == "# config: test");
    REQUIRE(l2 == "# units: none");
    REQUIRE(l3 == "# columns: a,b");
    REQUIRE(l4 == "1.5,-2");
    const auto comma = l5.find(',');
    REQUIRE(l5.substr(0, comma) == "0.25");
    REQUIRE(std::stod(l5.substr(comma + 1)) == 1e-12);

    REQUIRE_THROWS_AS(CsvWriter("/nonexistent-dir/x.csv", {}, {"a"}), std::runtime_error);
}

TEST_CASE("matrix file round trip")
{
    const PhysicalParams params{2.0, 9.0};
    const ElementEvaluator eval(params, Model::KM);
    const QubitArray arr = build_lattice(LatticeSpec{{2, 2, 1}, 20.0, {0, 0, 1}});
    const EffectiveHamiltonian H = build_single_excitation(arr, eval);

    std::stringstream buf;
    write_matrix(buf, H);
    const EffectiveHamiltonian back = read_matrix(buf);

    REQUIRE(back.matrix.rows() == H.matrix.rows());
    REQUIRE(back.model == H.model);
    REQUIRE(back.params.gamma == H.params.gamma);
    REQUIRE(back.params.lambda_a == H.params.lambda_a);
    // %.17g round-trips doubles exactly
    REQUIRE(back.matrix == H.matrix);
}

TEST_CASE("matrix reader error paths")
{
    std::stringstream no_n("# superrad matrix v1\n# model km\n0 0\n");
    REQUIRE_THROWS_AS(read_matrix(no_n), std::runtime_error);

    std::stringstream truncated("# superrad matrix v1\n# N 2\n0 0 0 0\n0 0\n");
    REQUIRE_THROWS_AS(read_matrix(truncated), std::runtime_error);
}

TEST_CASE("config parses nested json")
{
    const nlohmann::json j = {
        {"experiment", "rates"},
        {"lattice",
         {{"mode", "2d"}, {"spacing", 15.0}, {"dims", {2, 2, 1}}, {"dipole", {1.0, 0.0, 0.0}}}},
        {"physics", {{"lambda_a", 4.5}, {"gamma", 2e9}}},
        {"model", "both"},
        {"sweep", {2, 4, 8}},
        {"output_dir", "/tmp/out"},
        {"quadrature", {{"rel_tol", 1e-9}, {"avg_periods", 6}}},
        {"integrator", {{"dt", 1e-13}, {"t_end", 2e-11}, {"scheme_order", 1}}},
        {"include_diagonal", true},
        {"corner_only", false},
        {"bins", 21},
        {"eigensolver_cap", 512},
        {"jobs", 4},
    };
    const ExperimentConfig cfg = config_from_json(j);
    REQUIRE(cfg.experiment == Experiment::Rates);
    REQUIRE(cfg.planar);
    REQUIRE(cfg.spacing == 15.0);
    REQUIRE(cfg.dims == std::vector<int>{2, 2, 1});
    REQUIRE(cfg.dipole == std::array<double, 3>{1.0, 0.0, 0.0});
    REQUIRE(cfg.lambda_a == 4.5);
    REQUIRE(cfg.gamma == 2e9);
    REQUIRE(cfg.model == ModelChoice::Both);
    REQUIRE(cfg.sweep == std::vector<int>{2, 4, 8});
    REQUIRE(cfg.output_dir == "/tmp/out");
    REQUIRE(cfg.quadrature.rel_tol == 1e-9);
    REQUIRE(cfg.quadrature.avg_periods == 6);
    REQUIRE(cfg.quadrature.u_max_factor == 50.0);  // untouched default
    REQUIRE(cfg.dt == 1e-13);
    REQUIRE(cfg.t_end == 2e-11);
    REQUIRE(cfg.scheme_order == 1);
    REQUIRE(cfg.include_diagonal);
    REQUIRE_FALSE(cfg.corner_only);
    REQUIRE(cfg.bins == 21);
    REQUIRE(cfg.eigensolver_cap == 512);
    REQUIRE(cfg.jobs == 4);
    REQUIRE_NOTHROW(cfg.validate());
}

TEST_CASE("config json round trip preserves fields")
{
    ExperimentConfig cfg;
    cfg.experiment = Experiment::KmCompare;
    cfg.spacing = 12.5;
    cfg.model = ModelChoice::Kernel;
    cfg.compare_x = {1.0, 2.0};
    cfg.compare_theta_deg = {90.0};

    const ExperimentConfig back = config_from_json(config_to_json(cfg));
    REQUIRE(back.experiment == cfg.experiment);
    REQUIRE(back.spacing == cfg.spacing);
    REQUIRE(back.model == cfg.model);
    REQUIRE(back.compare_x == cfg.compare_x);
    REQUIRE(back.compare_theta_deg == cfg.compare_theta_deg);
}

TEST_CASE("config error messages carry field paths")
{
    auto message_of = [](auto fn) {
        try {
            fn();
        } catch (const ConfigError& e) {
            return std::string(e.what());
        }
        return std::string("(no error)");
    };

    REQUIRE(message_of([] {
                config_from_json({{"lattice", {{"spacing", "wide"}}}});
            }).find("lattice.spacing") != std::string::npos);
    REQUIRE(message_of([] {
                config_from_json({{"lattice", {{"mode", "4d"}}}});
            }).find("lattice.mode") != std::string::npos);
    REQUIRE(message_of([] {
                config_from_json({{"lattice", {{"dipole", {1.0, 0.0}}}}});
            }).find("lattice.dipole") != std::string::npos);
    REQUIRE(message_of([] { parse_experiment("bogus"); }).find("experiment") !=
            std::string::npos);
    REQUIRE(message_of([] { parse_model("bogus"); }).find("model") != std::string::npos);
}

TEST_CASE("config validation catches inconsistent setups")
{
    ExperimentConfig cfg;
    cfg.experiment = Experiment::Norms;
    REQUIRE_THROWS_AS(cfg.validate(), ConfigError);  // empty sweep

    cfg.sweep = {2, 4, 3};
    REQUIRE_THROWS_AS(cfg.validate(), ConfigError);  // not ascending

    cfg.sweep = {1, 2};
    REQUIRE_THROWS_AS(cfg.validate(), ConfigError);  // side < 2

    cfg.sweep = {2, 4};
    REQUIRE_NOTHROW(cfg.validate());

    cfg.dipole = {0.0, 0.0, 2.0};
    REQUIRE_THROWS_AS(cfg.validate(), ConfigError);
    cfg.dipole = {0.0, 0.0, 1.0};

    cfg.bins = 0;
    REQUIRE_THROWS_AS(cfg.validate(), ConfigError);
    cfg.bins = 41;

    cfg.experiment = Experiment::MarkovCheck;
    cfg.dims = {3, 2, 1};  // N = 6 exceeds the exact-solver budget
    REQUIRE_THROWS_AS(cfg.validate(), ConfigError);
    cfg.dims = {2, 2, 1};
    REQUIRE_NOTHROW(cfg.validate());

    cfg.experiment = Experiment::KmCompare;
    cfg.compare_x = {1.0, -2.0};
    REQUIRE_THROWS_AS(cfg.validate(), ConfigError);
}
