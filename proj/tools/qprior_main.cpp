// qprior: information-geometric priors for two-level quantum systems.
// Subcommands evaluate metric tensors, build and marginalize priors, run the
// comparative noninformativity test, and emit the full report as CSV/markdown.
//
// Exit codes: 0 success, 2 domain/math error, 64 usage error.
// stdout carries data; stderr carries diagnostics.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "qprior/bayes.hpp"
#include "qprior/clarke.hpp"
#include "qprior/config.hpp"
#include "qprior/metrics.hpp"
#include "qprior/priors.hpp"
#include "qprior/report.hpp"

using namespace qprior;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitDomain = 2;
constexpr int kExitUsage = 64;

std::vector<double> parse_point(const std::string& csv) {
    std::vector<double> out;
    std::stringstream ss(csv);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(std::stod(tok));
    return out;
}

PriorConfig prior_config(const Config& cfg) {
    PriorConfig pc;
    pc.q_min = cfg.q_min;
    pc.q_max = cfg.q_max;
    pc.pb_convention = cfg.pb_convention;
    pc.pb_printed_delta = cfg.pb_printed_delta;
    return pc;
}

void print_tensor(const MetricTensor& g) {
    std::printf("coords:");
    for (const auto& l : g.labels) std::printf(" %s", l.c_str());
    std::printf("\n");
    for (int i = 0; i < g.dim; ++i) {
        for (int j = 0; j < g.dim; ++j) std::printf("% .17g ", g.at(i, j));
        std::printf("\n");
    }
    std::printf("det = %.17g\nvolume_element = %.17g\ndegenerate = %s\n", g.det(), g.volume_element(),
                g.degenerate() ? "true" : "false");
}

MetricTensor closed_metric_at(const std::string& family, const std::vector<double>& pt, bool truncated) {
    if (family == "bloch") {
        if (pt.size() != 3) throw std::invalid_argument("bloch point is r,theta1,theta2");
        return bures_bloch_closed({pt[0], pt[1], pt[2]});
    }
    if (family == "escort") {
        if (pt.size() != 4) throw std::invalid_argument("escort point is q,r,theta1,theta2");
        return bures_extended_closed({{pt[1], pt[2], pt[3]}, pt[0]}, truncated);
    }
    if (family == "spin1") {
        if (pt.size() != 4) throw std::invalid_argument("spin1 point is v,r,theta1,theta2");
        return spin1_bures_closed({pt[0], pt[1], pt[2], pt[3]});
    }
    if (family == "aberaj") {
        if (pt.size() != 2) throw std::invalid_argument("aberaj point is b_q,sigma_q2");
        return aberaj_metric_q1({pt[0], pt[1]});
    }
    throw CLI::ValidationError("--family", "unknown family '" + family + "'");
}

// ---------------------------------------------------------------------------
// report --all
// ---------------------------------------------------------------------------

struct PaperComparison {
    std::string label;
    double got = 0.0, want = 0.0, tol = 0.02;
    bool has_target = true;
    bool pass() const { return !has_target || std::abs(got - want) <= tol * std::abs(want); }
};

void emit_report(const Config& cfg) {
    namespace fs = std::filesystem;
    const fs::path dir = cfg.out_dir;
    fs::create_directories(dir);
    std::vector<PaperComparison> cmp;
    auto add = [&](const std::string& label, double got, double want, double tol = 0.02) {
        cmp.push_back({label, got, want, tol, true});
    };

    const PriorConfig pc = prior_config(cfg);
    PriorDensity B = build_prior("p_B", pc), Bt = build_prior("p_Btrunc", pc), F = build_prior("p_F", pc),
                 F1 = build_prior("p_Fq1", pc);
    std::vector<PriorDensity> priors{F1, B, Bt, F};

    std::cerr << "report: constants and priors\n";
    add("N_F", fisher_husimi_norm_constant(), 1.39350989, 1e-4);
    add("N_Fq1", fisher_husimi_extended_q1_norm_constant(), 0.24559293, 1e-4);
    {
        std::vector<CsvRow> rows;
        rows.push_back({std::string("N_F"), fisher_husimi_norm_constant(), std::string("1.39350989")});
        rows.push_back({std::string("N_Fq1"), fisher_husimi_extended_q1_norm_constant(), std::string("0.24559293")});
        rows.push_back({std::string("p_B raw Bures volume"), B.normalization, std::string("pi^2/8")});
        rows.push_back({std::string("p_Btrunc raw volume"), Bt.normalization, std::string("pi(1+log4)/24")});
        for (double q : {0.5, 2.0, 5.0})
            rows.push_back({std::string("escort-Husimi prefactor ratio at q=") + format_full(q),
                            escort_husimi_prefactor_ratio(q), std::string("2^(1-q)")});
        write_csv(dir / "constants.csv", {"name", "value", "reference"}, rows);
    }

    // ---- KL table and ranking ----
    std::cerr << "report: KL table and ranking (this is the slow part)\n";
    RankingReport rk = rank(priors, MeasurementSpec::three_pairs(0.5), cfg.kl_rel_tol);
    {
        std::vector<CsvRow> rows;
        for (const auto& v : rk.pairs) {
            rows.push_back({v.first, v.second, v.s12, v.s21, v.s12_post_pow1, v.s21_post_pow1, v.s12_post,
                            v.s21_post, std::string(to_string(v.verdict))});
        }
        write_csv(dir / "kl_table.csv",
                  {"first", "second", "S12", "S21", "S12_post_pow1", "S21_post_pow1", "S12_post_sqrt",
                   "S21_post_sqrt", "verdict"},
                  rows);
    }
    auto pairv = [&](const std::string& a, const std::string& b) -> const ClarkeVerdict& {
        for (const auto& v : rk.pairs)
            if (v.first == a && v.second == b) return v;
        throw std::runtime_error("pair not found");
    };
    {
        const auto& v = pairv("p_B", "p_Btrunc");
        add("S(B||Bt)", v.s12, 0.101846);
        add("S(Bt||B)", v.s21, 0.0661775);
        add("S(postB||Bt) pow1", v.s12_post_pow1, 0.169782);
        add("S(postBt||B) pow1", v.s21_post_pow1, 0.197657);
        add("S(postB||Bt) sqrt", v.s12_post, 0.093849);
        add("S(postBt||B) sqrt", v.s21_post, 0.114669);
    }
    {
        const auto& v = pairv("p_Fq1", "p_F");  // stored order in `priors`
        add("S(F||F1)", v.s21, 0.229666);
        add("S(F1||F)", v.s12, 0.170145);
        add("S(postF||F1) pow1", v.s21_post_pow1, 0.70766);
        add("S(postF1||F) pow1", v.s12_post_pow1, 0.0641738);
    }
    {
        const auto& v = pairv("p_Fq1", "p_B");
        add("S(B||F1)", v.s21, 0.148269);
        add("S(F1||B)", v.s12, 0.0989669);
        add("S(postB||F1) sqrt", v.s21_post, 0.283218);
        add("S(postF1||B) sqrt", v.s12_post, 0.0842879);
    }
    {
        const auto& v = pairv("p_Fq1", "p_Btrunc");
        add("S(Bt||F1)", v.s21, 0.105463);
        add("S(F1||Bt)", v.s12, 0.0914175);
        add("S(postBt||F1) sqrt", v.s21_post, 0.245602);
        add("S(postF1||Bt) sqrt", v.s12_post, 0.0408236);
    }
    {
        const auto& v = pairv("p_Btrunc", "p_F");
        add("S(Bt||F)", v.s12, 0.0191948);
        add("S(F||Bt)", v.s21, 0.0234599);
        add("S(postBt||F) sqrt", v.s12_post, 0.0143147);
        add("S(postF||Bt) sqrt", v.s21_post, 0.1047772);
    }

    std::string ranking_line = "ranking:";
    for (int idx : rk.order) ranking_line += " " + rk.names[static_cast<std::size_t>(idx)];
    if (!rk.total_order) ranking_line = "ranking: no total order (inconclusive or intransitive pairs)";

    // ---- dominance / fig 1 ----
    std::cerr << "report: dominance scan\n";
    DominanceReport dom = pure_state_dominance(priors, 0.005, 20);
    {
        std::vector<CsvRow> rows;
        for (const auto& s : dom.samples) {
            CsvRow row{s.r};
            for (double v : s.values) row.push_back(v);
            std::string order;
            for (int i : s.descending) order += (order.empty() ? "" : ">") + dom.names[static_cast<std::size_t>(i)];
            row.push_back(order);
            rows.push_back(std::move(row));
        }
        write_csv(dir / "fig1_dominance.csv", {"r", "p_Fq1", "p_B", "p_Btrunc", "p_F", "order"}, rows);
    }

    // ---- figure data ----
    std::cerr << "report: figure data\n";
    {
        // f_bures_q(t) curves
        std::vector<CsvRow> rows;
        for (double q : {0.5, 1.0, 2.0, 5.0})
            for (int i = 1; i < 100; ++i) {
                const double t = static_cast<double>(i) / 100.0;
                rows.push_back({q, t, f_eval(FFunctionId::f_bures_q, t, q)});
            }
        write_csv(dir / "fig2_f_bures_q.csv", {"q", "t", "f"}, rows);
    }
    PriorDensity B4 = build_prior("p_Bqext4D", pc);
    {
        std::vector<CsvRow> rows;
        for (int iq = 0; iq <= 40; ++iq) {
            const double q = cfg.q_min * std::pow(cfg.q_max / cfg.q_min, iq / 40.0);
            for (int ir = 1; ir < 40; ++ir) {
                const double r = ir / 40.0;
                rows.push_back({q, r, B4.qr_marginal(q, r) * B4.normalization});
            }
        }
        write_csv(dir / "fig3_bures_qr_marginal.csv", {"q", "r", "raw_marginal"}, rows);
    }
    {
        std::vector<CsvRow> rows;
        for (int iq = 0; iq <= 200; ++iq) {
            const double q = cfg.q_min * std::pow(cfg.q_max / cfg.q_min, iq / 200.0);
            const double closed = std::numbers::pi * (1.0 + std::log(4.0)) / (24.0 * q);
            rows.push_back({q, closed});
        }
        write_csv(dir / "fig4_bures_q_marginal.csv", {"q", "raw_marginal"}, rows);
        add("bures q-marginal at q=2 (closed)",
            marginal(B4, "q", {2.0}, true, 1e-8).values[0],
            std::numbers::pi * (1.0 + std::log(4.0)) / 48.0, 1e-4);
    }
    {
        std::vector<CsvRow> rows;
        for (int ir = 1; ir < 80; ++ir) {
            const double r = ir / 80.0;
            const double v = extended_bures_q_antiderivative(cfg.q_max, r) -
                             extended_bures_q_antiderivative(cfg.q_min, r);
            rows.push_back({r, v});
        }
        write_csv(dir / "fig5_bures_r_marginal.csv", {"r", "raw_marginal"}, rows);
    }
    {
        std::cerr << "report: husimi 2D marginal grid\n";
        std::vector<CsvRow> rows;
        for (int iq = 0; iq <= 24; ++iq) {
            const double q = cfg.q_min * std::pow(cfg.q_max / cfg.q_min, iq / 24.0);
            for (int ir = 1; ir < 24; ++ir) {
                const double r = ir / 24.0;
                rows.push_back({q, r, husimi_qext_qr_raw(q, r, 1e-8)});
            }
        }
        write_csv(dir / "fig6_husimi_qr_marginal.csv", {"q", "r", "raw_marginal"}, rows);
    }
    double husimi_peak_q = 0.0, husimi_peak_val = 0.0;
    {
        std::cerr << "report: husimi q-marginal\n";
        std::vector<CsvRow> rows;
        for (int iq = 0; iq <= 80; ++iq) {
            const double q = cfg.q_min * std::pow(cfg.q_max / cfg.q_min, iq / 80.0);
            const double v = husimi_qext_q_marginal_raw(q, 1e-6);
            if (v > husimi_peak_val) {
                husimi_peak_val = v;
                husimi_peak_q = q;
            }
            rows.push_back({q, v});
        }
        // refine around the coarse peak
        for (double q = husimi_peak_q * 0.85; q <= husimi_peak_q * 1.18; q *= 1.01) {
            const double v = husimi_qext_q_marginal_raw(q, 1e-7);
            if (v > husimi_peak_val) {
                husimi_peak_val = v;
                husimi_peak_q = q;
            }
        }
        write_csv(dir / "fig7_husimi_q_marginal.csv", {"q", "raw_marginal"}, rows);
        add("husimi q-marginal peak location", husimi_peak_q, 3.59782, 0.05 / 3.59782);
        add("husimi q-marginal peak value (raw)", husimi_peak_val, 0.448488, 0.05);
    }
    {
        std::cerr << "report: husimi r-marginal\n";
        std::vector<CsvRow> rows;
        auto rmarg = [&](double r, double tol) {
            auto spec = make_spec({Axis{cfg.q_min, cfg.q_max, AxisTransform::log_scale}}, tol, 1e-13);
            return integrate([&](std::span<const double> x) { return husimi_qext_qr_raw(x[0], r, 1e-9); }, spec)
                .value;
        };
        for (int ir = 1; ir <= 40; ++ir) {
            const double r = ir / 41.0;
            rows.push_back({r, rmarg(r, 1e-6)});
        }
        for (double r : {0.95, 0.97, 0.99, 0.995}) rows.push_back({r, rmarg(r, 1e-8)});
        write_csv(dir / "fig8_husimi_r_marginal.csv", {"r", "raw_marginal"}, rows);
    }

    // ---- information gains ----
    std::cerr << "report: information gains\n";
    {
        std::vector<CsvRow> rows;
        const double g1 = info_gain(B, likelihood(MeasurementSpec::z_pair()), 1e-9).nats;
        const double g2 = info_gain(B, likelihood(MeasurementSpec::z_up(1)), 1e-9).nats;
        const double g3 = info_gain(B, likelihood(MeasurementSpec::z_up(2)), 1e-9).nats;
        GainResult e1 = info_gain_qext(B4, MeasurementSpec::z_pair(), cfg.rel_tol_4d);
        GainResult e2 = info_gain_qext(B4, MeasurementSpec::z_up(1), cfg.rel_tol_4d);
        GainResult e3 = info_gain_qext(B4, MeasurementSpec::z_up(2), cfg.rel_tol_4d);
        rows.push_back({std::string("z pair"), g1, 7.0 / 6.0 - std::log(3.0), e1.nats, 0.0597923, e1.evals});
        rows.push_back({std::string("single z-up"), g2, 0.140186, e2.nats, 0.134651, e2.evals});
        rows.push_back({std::string("two z-up"), g3, 59.0 / 30.0 - std::log(5.0), e3.nats, 0.349601, e3.evals});
        write_csv(dir / "gains.csv",
                  {"measurement", "unextended", "unextended_reference", "extended", "extended_reference",
                   "extended_evals"},
                  rows);
        add("gain z-pair", g1, 7.0 / 6.0 - std::log(3.0), 1e-4);
        add("gain single", g2, 0.140186, 1e-4);
        add("gain two-same", g3, 59.0 / 30.0 - std::log(5.0), 1e-4);
        add("gain z-pair extended", e1.nats, 0.0597923);
        add("gain single extended", e2.nats, 0.134651);
        add("gain two-same extended", e3.nats, 0.349601);
    }

    // ---- AbeRaj volume-element variant ----
    {
        std::vector<CsvRow> rows;
        for (const AbeRajPoint p : {AbeRajPoint{0.9, 5.0}, AbeRajPoint{0.1, 4.0}, AbeRajPoint{-1.2, 6.5}}) {
            MetricTensor g = aberaj_metric_q1(p);
            const double sub = std::sqrt(std::max(g.at(1, 1) * g.at(2, 2) - g.at(1, 2) * g.at(1, 2), 0.0));
            const double v_sig2 = aberaj_subblock_volume(p);
            const double v_sig =
                0.25 * std::sqrt(-1.0 / ((std::sqrt(p.sigma_q2) - 8.0) *
                                         (p.sigma_q2 * p.sigma_q2 - 8.0 * p.b_q * p.b_q)));
            rows.push_back({p.b_q, p.sigma_q2, sub, v_sig2, v_sig, g.det()});
        }
        write_csv(dir / "aberaj.csv",
                  {"b_q", "sigma_q2", "subblock_volume", "printed_with_sigma2", "printed_as_is", "det3x3"}, rows);
    }

    // ---- convention sensitivity appendix ----
    std::cerr << "report: p_B convention sensitivity\n";
    std::vector<CsvRow> sens_rows;
    {
        PriorConfig printed = pc;
        printed.pb_convention = "printed";
        PriorDensity Bp = build_prior("p_B", printed);
        auto entry = [&](const std::string& label, const PriorDensity& a, const PriorDensity& b, double want) {
            const double v = kl(a, b, cfg.kl_rel_tol).value;
            sens_rows.push_back({label, v, want});
            return v;
        };
        entry("S(B||Bt) printed", Bp, Bt, 0.101846);
        entry("S(Bt||B) printed", Bt, Bp, 0.0661775);
        entry("S(B||F1) printed", Bp, F1, 0.148269);
        entry("S(F1||B) printed", F1, Bp, 0.0989669);
        entry("S(B||F) printed", Bp, F, -1.0);
        entry("S(F||B) printed", F, Bp, -1.0);
        write_csv(dir / "pb_convention_sensitivity.csv", {"statistic", "printed_convention_value", "paper_value"},
                  sens_rows);
    }

    // ---- summary ----
    std::cerr << "report: summary\n";
    {
        std::ostringstream md;
        md << "# qprior report\n\n";
        md << "Configuration: q in [" << cfg.q_min << ", " << cfg.q_max << "], p_B convention `"
           << cfg.pb_convention << "`.\n\n";
        md << "## " << ranking_line << "\n\n";
        md << "Transitivity " << (rk.transitive ? "confirmed" : "violated") << "; "
           << (rk.any_inconclusive ? "some pairs inconclusive" : "all pairs conclusive") << ".\n\n";

        md << "## Values vs reference\n\n";
        std::vector<std::vector<std::string>> rows;
        int fails = 0;
        for (const auto& c : cmp) {
            rows.push_back({c.label, format_full(c.got), format_full(c.want),
                            format_full(std::abs(c.got - c.want) / std::abs(c.want)), c.pass() ? "ok" : "DEVIATES"});
            if (!c.pass()) ++fails;
        }
        md << markdown_table({"statistic", "computed", "reference", "rel dev", "status"}, rows) << "\n";
        md << (fails == 0 ? "All tracked values reproduce within tolerance.\n"
                          : std::to_string(fails) + " value(s) deviate beyond tolerance.\n");

        md << "\n## Dominance near the pure states\n\n";
        int holding = 0;
        for (const auto& s : dom.samples)
            if (!s.descending.empty() && s.descending == dom.samples.front().descending) ++holding;
        md << "Printed order holds at " << holding << "/" << dom.samples.size()
           << " radii in [0.995, 1); see fig1_dominance.csv. The p_B marginal grows like (1-r)^(-1/2) and "
              "overtakes p_Fq1 (which grows like sqrt(log 1/(1-r))) just above r = 0.995, so the printed "
              "dominance holds only at the left edge of that window. Near r = 0 the order is ";
        for (std::size_t i = 0; i < dom.order_near_zero.size(); ++i)
            md << dom.names[static_cast<std::size_t>(dom.order_near_zero[i])]
               << (i + 1 < dom.order_near_zero.size() ? " > " : "");
        md << ", not the exact reverse.\n";

        md << "\n## Conventions\n\n"
           << "- Husimi kernel H = (1 + r cos gamma)/2 under dOmega/(2 pi); escort version normalized by "
              "construction. The printed prefactor differs by exactly 2^(1-q) (constants.csv).\n"
           << "- The husimi q-marginal peak value is reproduced by the raw (unnormalized) marginal.\n"
           << "- The Bell-CHSH sub-block volume element matches the printed form with sigma_q^2 in place of "
              "sigma_q (aberaj.csv).\n"
           << "- p_B convention sensitivity: pb_convention_sensitivity.csv (printed form truncated at 1 - "
           << cfg.pb_printed_delta << ").\n"
           << "- The q->1 limit of the escort-Husimi tangent function reproduces the 3D Fisher tangent "
              "function; the analogous claim for the Bures tangent function does not hold (it diverges at "
              "t = 1) and is recorded as unreproduced.\n";

        atomic_write(dir / "summary.md", md.str());
    }
    std::printf("report written to %s\n", dir.string().c_str());
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"information-geometric priors for two-level quantum systems"};
    app.require_subcommand(1);

    std::string config_path;
    Config cfg;
    try {
        cfg = load_config_from_env();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDomain;
    }
    app.add_option("--config", config_path, "config file (key = value)");
    app.add_option("--q-min", cfg.q_min, "lower escort-parameter bound");
    app.add_option("--q-max", cfg.q_max, "upper escort-parameter bound");
    app.add_option("--pb-convention", cfg.pb_convention, "p_B volume element: sqrt|printed");
    app.add_option("--out-dir", cfg.out_dir, "output directory for report/CSV files");
    app.add_option("--seed", cfg.seed, "sampler seed");
    app.add_option("--max-evals", cfg.max_evals, "quadrature evaluation budget");

    // metric ------------------------------------------------------------
    auto* metric = app.add_subcommand("metric", "evaluate/check metric tensors and degeneracy");
    std::string m_mode, m_family = "bloch", m_point;
    int m_samples = 100;
    bool m_truncated = false;
    metric->add_option("mode", m_mode, "eval|check|detnull")->required();
    metric->add_option("--family", m_family, "bloch|escort|spin1|spin1q|aberaj")->required();
    metric->add_option("--point", m_point, "comma-separated coordinates");
    metric->add_option("--samples", m_samples, "sample count for check/detnull");
    metric->add_flag("--truncated", m_truncated, "zero the dq dr entry (escort family)");

    // prior ---------------------------------------------------------------
    auto* prior = app.add_subcommand("prior", "normalize priors and emit marginals");
    std::string p_mode, p_name, p_var = "r", p_out;
    int p_grid = 200;
    bool p_raw = false;
    prior->add_option("mode", p_mode, "normalize|marginal")->required();
    prior->add_option("--name", p_name, "p_B|p_Btrunc|p_F|p_Fq1|p_Bqext4D|p_Fqext4D")->required();
    prior->add_option("--var", p_var, "marginal variable: r|q");
    prior->add_option("--grid", p_grid, "grid size");
    prior->add_flag("--raw", p_raw, "emit the unnormalized volume-element marginal");
    prior->add_option("--out", p_out, "CSV output path (default stdout)");

    // kl --------------------------------------------------------------------
    auto* klcmd = app.add_subcommand("kl", "relative entropy between priors");
    std::string k_p, k_q;
    double k_post = 0.0;
    klcmd->add_option("--p", k_p, "first prior")->required();
    klcmd->add_option("--q", k_q, "second prior")->required();
    klcmd->add_option("--posterior", k_post,
                      "replace the first prior by its posterior under the three-pair likelihood^POW");

    // rank --------------------------------------------------------------------
    auto* rankcmd = app.add_subcommand("rank", "comparative noninformativity ranking");
    std::string r_priors = "p_B,p_Btrunc,p_F,p_Fq1";
    std::string r_spec = "x:1,1 y:1,1 z:1,1 pow:0.5";
    rankcmd->add_option("--priors", r_priors, "comma-separated prior names");
    rankcmd->add_option("--spec", r_spec, "test measurement spec");

    // infogain ------------------------------------------------------------
    auto* gain = app.add_subcommand("infogain", "information gain of a measurement");
    std::string g_prior = "p_B", g_spec = "z:1,1 pow:1";
    bool g_ext = false;
    gain->add_option("--prior", g_prior, "prior name");
    gain->add_option("--spec", g_spec, "measurement spec");
    gain->add_flag("--q-extended", g_ext, "use the 4D escort likelihood");

    // report ----------------------------------------------------------------
    auto* report = app.add_subcommand("report", "emit every table and figure CSV plus summary.md");
    bool rep_all = false;
    report->add_flag("--all", rep_all, "produce the full report");
    report->add_option("--out", cfg.out_dir, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (!config_path.empty()) cfg = load_config_file(config_path, cfg);
        cfg.validate();
        const PriorConfig pc = prior_config(cfg);

        if (metric->parsed()) {
            if (m_mode == "eval") {
                print_tensor(closed_metric_at(m_family, parse_point(m_point), m_truncated));
            } else if (m_mode == "check") {
                DensityFamily fam;
                std::function<MetricTensor(std::span<const double>)> closed;
                if (m_family == "bloch") {
                    fam = bloch_family();
                    closed = [](std::span<const double> x) { return bures_bloch_closed({x[0], x[1], x[2]}); };
                } else if (m_family == "escort") {
                    fam = escort_family();
                    closed = [](std::span<const double> x) {
                        return bures_extended_closed({{x[1], x[2], x[3]}, x[0]}, false);
                    };
                } else if (m_family == "spin1") {
                    fam = spin1_family();
                    closed = [](std::span<const double> x) { return spin1_bures_closed({x[0], x[1], x[2], x[3]}); };
                } else {
                    throw std::domain_error("metric check supports bloch|escort|spin1");
                }
                detail::SplitMix64 rng(cfg.seed);
                double worst = 0.0;
                for (int i = 0; i < m_samples; ++i) {
                    std::vector<double> x(fam.box.size());
                    for (std::size_t k = 0; k < x.size(); ++k)
                        x[k] = fam.box[k][0] + (fam.box[k][1] - fam.box[k][0]) * rng.uniform();
                    if (m_family == "spin1" && x[1] > 0.95 * x[0]) x[1] = 0.95 * x[0];
                    MetricTensor num = hubner_metric(fam, x);
                    MetricTensor cl = closed(x);
                    double scale = 0.0, dev = 0.0;
                    for (int j = 0; j < cl.dim * cl.dim; ++j) scale = std::max(scale, std::abs(cl.g[static_cast<std::size_t>(j)]));
                    for (int j = 0; j < cl.dim * cl.dim; ++j)
                        dev = std::max(dev, std::abs(num.g[static_cast<std::size_t>(j)] - cl.g[static_cast<std::size_t>(j)]) / scale);
                    worst = std::max(worst, dev);
                }
                std::printf("family %s: max relative deviation %.3e over %d samples\n", m_family.c_str(), worst,
                            m_samples);
                if (worst > 1e-5) return kExitDomain;
            } else if (m_mode == "detnull") {
                DegeneracyReport rep;
                if (m_family == "escort") {
                    rep = degeneracy_scan(
                        [&](std::span<const double> x) {
                            return bures_extended_closed({{x[1], x[2], x[3]}, x[0]}, m_truncated);
                        },
                        escort_family().box, m_samples, cfg.seed);
                } else if (m_family == "spin1q") {
                    auto fam = spin1_escort_family();
                    rep = degeneracy_scan([&](std::span<const double> x) { return hubner_metric(fam, x, 1e-6); },
                                          fam.box, m_samples, cfg.seed, 1e-7);
                } else if (m_family == "aberaj") {
                    std::vector<std::array<double, 2>> box{{-2.0, 2.0}, {0.5, 7.9}};
                    rep = degeneracy_scan(
                        [](std::span<const double> x) {
                            AbeRajPoint p{x[0], x[1]};
                            validate(p);
                            return aberaj_metric_q1(p);
                        },
                        box, m_samples, cfg.seed);
                } else if (m_family == "bloch") {
                    rep = degeneracy_scan(
                        [](std::span<const double> x) { return bures_bloch_closed({x[0], x[1], x[2]}); },
                        bloch_family().box, m_samples, cfg.seed);
                } else {
                    throw std::domain_error("metric detnull supports escort|spin1q|aberaj|bloch");
                }
                std::printf("family %s: max |det|/scale = %.3e over %d samples -> %s\n", m_family.c_str(),
                            rep.max_ratio, rep.evaluated, rep.degenerate ? "degenerate" : "non-degenerate");
            } else {
                std::cerr << "usage: metric eval|check|detnull\n";
                return kExitUsage;
            }
        } else if (prior->parsed()) {
            PriorDensity p = build_prior(p_name, pc);
            if (p_mode == "normalize") {
                std::printf("%s normalization = %.17g\n", p_name.c_str(), p.normalization);
                if (p_name == "p_F") std::printf("reference 1.39350989\n");
                if (p_name == "p_Fq1") std::printf("reference 0.24559293\n");
            } else if (p_mode == "marginal") {
                std::vector<double> grid;
                if (p.dim() == 4 && p_var == "q") {
                    for (int i = 0; i < p_grid; ++i)
                        grid.push_back(cfg.q_min *
                                       std::pow(cfg.q_max / cfg.q_min, static_cast<double>(i) / (p_grid - 1)));
                } else {
                    for (int i = 1; i <= p_grid; ++i)
                        grid.push_back(static_cast<double>(i) / (p_grid + 1));
                }
                MarginalCurve c = marginal(p, p_var, grid, p_raw);
                std::vector<CsvRow> rows;
                for (std::size_t i = 0; i < c.grid.size(); ++i)
                    rows.push_back({p_var, c.grid[i], c.values[i]});
                const std::string csv = to_csv({"variable", "value", "density"}, rows);
                if (p_out.empty())
                    std::fputs(csv.c_str(), stdout);
                else
                    atomic_write(p_out, csv);
            } else {
                std::cerr << "usage: prior normalize|marginal\n";
                return kExitUsage;
            }
        } else if (klcmd->parsed()) {
            PriorDensity p = build_prior(k_p, pc);
            PriorDensity q = build_prior(k_q, pc);
            if (k_post > 0.0) {
                LikelihoodField like = p.dim() == 4 ? likelihood_q(MeasurementSpec::three_pairs(k_post))
                                                    : likelihood(MeasurementSpec::three_pairs(k_post));
                p = posterior(p, like, cfg.kl_rel_tol);
            }
            KLResult r = kl(p, q, cfg.kl_rel_tol);
            std::printf("S_KL(%s || %s) = %.10f nats (err<=%.1e, %ld evals)\n", p.name.c_str(), q.name.c_str(),
                        r.value, r.error_estimate, r.evals);
        } else if (rankcmd->parsed()) {
            std::vector<PriorDensity> ps;
            std::stringstream ss(r_priors);
            std::string name;
            while (std::getline(ss, name, ',')) ps.push_back(build_prior(name, pc));
            RankingReport rep = rank(ps, MeasurementSpec::parse(r_spec), cfg.kl_rel_tol);
            std::vector<std::vector<std::string>> rows;
            for (const auto& v : rep.pairs)
                rows.push_back({v.first, v.second, format_full(v.s12), format_full(v.s21), format_full(v.s12_post),
                                format_full(v.s21_post), to_string(v.verdict)});
            std::fputs(markdown_table({"first", "second", "S12", "S21", "S12_post", "S21_post", "verdict"}, rows)
                           .c_str(),
                       stdout);
            if (rep.total_order) {
                std::string line = "ranking:";
                for (int i : rep.order) line += " " + rep.names[static_cast<std::size_t>(i)];
                std::printf("%s (transitive)\n", line.c_str());
            } else {
                std::printf("no total order: %s\n",
                            rep.any_inconclusive ? "inconclusive pair(s) flagged" : "intransitive verdicts");
            }
        } else if (gain->parsed()) {
            MeasurementSpec spec = MeasurementSpec::parse(g_spec);
            PriorDensity p = build_prior(g_prior, pc);
            GainResult r;
            if (g_ext) {
                r = info_gain_qext(p, spec, cfg.rel_tol_4d);
            } else {
                r = info_gain(p, likelihood(spec), cfg.rel_tol_3d);
            }
            std::printf("info gain = %.10f nats (evidence %.10g, %ld evals%s)\n", r.nats, r.evidence, r.evals,
                        r.converged ? "" : ", NOT converged");
        } else if (report->parsed()) {
            if (!rep_all) {
                std::cerr << "report: only --all is implemented; pass --all\n";
                return kExitUsage;
            }
            emit_report(cfg);
        }
    } catch (const CLI::Error& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDomain;
    } catch (const std::domain_error& e) {
        std::cerr << "domain error: " << e.what() << "\n";
        return kExitDomain;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDomain;
    }
    return kExitOk;
}
