#include <cstdlib>
#include <filesystem>
#include <iostream>

#include <CLI11.hpp>

#include "sphx/asymptotics.hpp"
#include "sphx/exponents.hpp"
#include "sphx/harness.hpp"
#include "sphx/kernels.hpp"
#include "sphx/spherical.hpp"

using namespace sphx;

namespace {

Vec to_vec(const std::vector<double>& v) {
    Vec x(v.size());
    for (size_t i = 0; i < v.size(); ++i) x(i) = v[i];
    return x;
}

std::string out_dir(const std::string& flag_value) {
    if (const char* env = std::getenv("SPHX_OUT"); env && *env) return env;
    return flag_value;
}

int run_checks(std::vector<CheckResult> results) {
    for (auto& r : results) {
        const char* st = r.status == CheckStatus::Pass ? "PASS"
                         : r.status == CheckStatus::Fail ? "FAIL"
                                                         : "SKIP";
        std::cout << st << " " << r.name << " measured=" << fmt_g(r.measured)
                  << " bound=" << fmt_g(r.bound);
        if (!r.note.empty()) std::cout << " (" << r.note << ")";
        std::cout << "\n";
    }
    return exit_code(results);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"sphx: spherical-function and eigenfunction-bound verification suite"};
    app.require_subcommand(1);

    // catalog
    auto* cmd_catalog = app.add_subcommand("catalog", "dump the space catalog as JSON");

    // exponent
    auto* cmd_exp = app.add_subcommand("exponent", "emit the exponent comparison CSV");
    std::string exp_space = "SL3R";
    int exp_grid = 50;
    std::string exp_out = "exponent.csv";
    cmd_exp->add_option("--space", exp_space);
    cmd_exp->add_option("--grid", exp_grid);
    cmd_exp->add_option("--out", exp_out);

    // eval
    auto* cmd_eval = app.add_subcommand("eval", "evaluate a spherical function");
    std::string ev_space = "H2";
    double ev_t = 20;
    std::vector<double> ev_lambda = {1.0}, ev_H = {0.5};
    int ev_points = 64;
    double ev_tol = 1e-9;
    cmd_eval->add_option("--space", ev_space);
    cmd_eval->add_option("--t", ev_t);
    cmd_eval->add_option("--lambda", ev_lambda)->expected(-1);
    cmd_eval->add_option("--H", ev_H)->expected(-1);
    cmd_eval->add_option("--quad-points", ev_points);
    cmd_eval->add_option("--tol", ev_tol);

    // verify
    auto* cmd_verify = app.add_subcommand("verify", "asymptotic / envelope / hessian checks");
    std::string vf_what = "envelope", vf_space = "H2", vf_report = "verify.csv", vf_path = "wall-crossing";
    std::vector<double> vf_ladder = {10, 20, 40, 80};
    cmd_verify->add_option("what", vf_what, "asymptotic|envelope|hessian");
    cmd_verify->add_option("--space", vf_space);
    cmd_verify->add_option("--t-ladder", vf_ladder)->expected(-1);
    cmd_verify->add_option("--H-path", vf_path, "wall-crossing|regular");
    cmd_verify->add_option("--report", vf_report);

    // kernel
    auto* cmd_kernel = app.add_subcommand("kernel", "build/check spectral projector kernels");
    std::string kn_what = "build", kn_space = "h2", kn_out = "kernel.csv";
    double kn_t = 40, kn_Lambda = 1.0;
    int kn_grid = 0;
    cmd_kernel->add_option("what", kn_what, "build|check|dyadic");
    cmd_kernel->add_option("--space", kn_space, "h2|s2");
    cmd_kernel->add_option("--t", kn_t);
    cmd_kernel->add_option("--Lambda", kn_Lambda);
    cmd_kernel->add_option("--grid-points", kn_grid);
    cmd_kernel->add_option("--out", kn_out);

    // beam
    auto* cmd_beam = app.add_subcommand("beam", "beam norms and decay");
    std::string bm_space = "S2";
    std::vector<double> bm_ladder = {20, 40, 80, 160};
    cmd_beam->add_option("--space", bm_space);
    cmd_beam->add_option("--t-ladder", bm_ladder)->expected(-1);

    // suite
    auto* cmd_suite = app.add_subcommand("suite", "run a verification suite");
    std::string su_config, su_suite, su_out = "out";
    cmd_suite->add_option("--config", su_config, "JSON config file");
    cmd_suite->add_option("--suite", su_suite, "exponents|asymptotics|envelopes|kernels|beams|all");
    cmd_suite->add_option("--out", su_out);

    // golden
    auto* cmd_golden = app.add_subcommand("golden", "compare a run dir against a golden dir");
    std::string gd_run, gd_golden;
    double gd_rel = 1e-9;
    cmd_golden->add_option("run_dir", gd_run)->required();
    cmd_golden->add_option("golden_dir", gd_golden)->required();
    cmd_golden->add_option("--rel-tol", gd_rel);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*cmd_catalog) {
            std::cout << catalog_to_json();
            return 0;
        }
        if (*cmd_exp) {
            write_exponent_graph_csv(catalog_space(exp_space), exp_grid, exp_out);
            std::cout << "wrote " << exp_out << "\n";
            return 0;
        }
        if (*cmd_eval) {
            const auto& s = catalog_space(ev_space);
            QuadratureSpec q;
            q.points_per_dim = ev_points;
            q.refinement = ev_tol;
            SpectralParameter lam{to_vec(ev_lambda), ev_t};
            ChamberVector H{to_vec(ev_H), is_dominant(s.roots, to_vec(ev_H))};
            EvalResult r = s.compact() ? phi_compact(s, lam, H, q) : phi_noncompact(s, lam, H, q);
            std::cout << "space,t,lambda,H,re_phi,im_phi,err_est,nodes\n";
            std::string ls, hs;
            for (double v : ev_lambda) ls += (ls.empty() ? "" : ";") + fmt_g(v);
            for (double v : ev_H) hs += (hs.empty() ? "" : ";") + fmt_g(v);
            std::cout << ev_space << "," << fmt_g(ev_t) << "," << ls << "," << hs << ","
                      << fmt_g(r.value.real()) << "," << fmt_g(r.value.imag()) << ","
                      << fmt_g(r.abs_error_est) << "," << r.nodes_used << "\n";
            return 0;
        }
        if (*cmd_verify) {
            RunConfig cfg;
            cfg.suite = (vf_what == "envelope") ? "envelopes" : "asymptotics";
            cfg.spaces = {vf_space};
            cfg.t_ladder = vf_ladder;
            cfg.output_dir = out_dir(std::filesystem::path(vf_report).parent_path().string().empty()
                                         ? "."
                                         : std::filesystem::path(vf_report).parent_path().string());
            return run_checks(run_suite(cfg));
        }
        if (*cmd_kernel) {
            if (kn_space == "h2") {
                const auto& s = catalog_space("H2");
                PaleyWienerBump bump = build_bump();
                KernelTable tab = invert_transform(s, bump, kn_Lambda, kn_t);
                CsvTable t;
                t.meta = {"space=H2", "t=" + fmt_g(kn_t), "Lambda=" + fmt_g(kn_Lambda),
                          "multiplier_power=" + std::to_string(tab.multiplier_power),
                          "scale=" + fmt_g(tab.scale)};
                t.header = {"x", "K"};
                int stride = kn_grid > 0 ? std::max<int>(1, int(tab.x.size()) / kn_grid) : 8;
                for (size_t i = 0; i < tab.x.size(); i += stride)
                    t.rows.push_back({fmt_g(tab.x[i]), fmt_g(tab.K[i])});
                csv_write(kn_out, t);
                std::cout << "wrote " << kn_out << " K(0)=" << fmt_g(tab.K0) << "\n";
                if (kn_what == "dyadic") {
                    for (int m = 1; m <= dyadic_m_max(kn_t) - 1; ++m) {
                        auto piece = dyadic_truncate(tab, m);
                        std::cout << "m=" << m << " sup=" << fmt_g(piece.sup_norm)
                                  << " transform_sup=" << fmt_g(piece.transform_sup) << "\n";
                    }
                }
                if (kn_what == "check") {
                    auto rt = round_trip_check(tab, bump);
                    std::cout << "round_trip_max_rel_err=" << fmt_g(rt.max_rel_err) << "\n";
                }
            } else {
                const auto& s = catalog_space("S2");
                auto cp = compact_projector(s, kn_t);
                CsvTable t;
                t.meta = {"space=S2", "t=" + fmt_g(kn_t), "band=" + std::to_string(cp.band)};
                t.header = {"l", "coeff"};
                for (size_t l = 0; l < cp.coeff.size(); ++l)
                    t.rows.push_back({fmt_g(double(l)), fmt_g(cp.coeff[l])});
                csv_write(kn_out, t);
                std::cout << "wrote " << kn_out << " pole=" << fmt_g(cp.pole_value())
                          << " mass_outside=" << fmt_g(cp.mass_outside_band) << "\n";
            }
            return 0;
        }
        if (*cmd_beam) {
            const auto& s = catalog_space(bm_space);
            auto rep = beam_l2_lower(s, bm_ladder);
            std::cout << "space,t,l2_norm\n";
            for (size_t i = 0; i < rep.t.size(); ++i)
                std::cout << bm_space << "," << fmt_g(rep.t[i]) << "," << fmt_g(rep.value[i]) << "\n";
            std::cout << "# slope=" << fmt_g(rep.slope) << " expected=" << fmt_g(rep.expected) << "\n";
            return 0;
        }
        if (*cmd_suite) {
            RunConfig cfg;
            if (!su_config.empty()) cfg = RunConfig::from_json_file(su_config);
            if (!su_suite.empty()) cfg.suite = su_suite;       // CLI overrides config
            if (su_out != "out" || su_config.empty()) cfg.output_dir = su_out;
            cfg.output_dir = out_dir(cfg.output_dir);
            return run_checks(run_suite(cfg));
        }
        if (*cmd_golden) {
            auto r = golden_compare(gd_run, gd_golden, gd_rel);
            std::cout << (r.status == CheckStatus::Pass ? "PASS " : "FAIL ") << r.name;
            if (!r.note.empty()) std::cout << " (" << r.note << ")";
            std::cout << "\n";
            return r.status == CheckStatus::Pass ? 0 : 1;
        }
    } catch (const ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
