// Command-line front end: one subcommand per experiment plus array generation and single scans.

#include <algorithm>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "scandict/config.hpp"
#include "scandict/experiments.hpp"
#include "scandict/fields.hpp"
#include "scandict/predict.hpp"
#include "scandict/scan.hpp"

using namespace scandict;

namespace {

struct Common {
    std::uint64_t seed = 1;
    std::string out = "-";
    std::string config;
};

void add_common(CLI::App* cmd, Common& c)
{
    cmd->add_option("--seed", c.seed, "Base seed; replica i uses seed + i")->capture_default_str();
    cmd->add_option("--out", c.out, "Output file, '-' for stdout")->capture_default_str();
    cmd->add_option("--config", c.config, "key=value file applied before the command-line flags");
}

// Writes through a file or stdout depending on the path.
void emit(const std::string& path, const std::function<void(std::ostream&)>& write)
{
    if (path == "-") {
        write(std::cout);
        return;
    }
    std::ofstream out(path);
    if (!out) {
        throw Error("cannot open '" + path + "' for writing");
    }
    write(out);
}

// Moves config-file entries in front of the user's flags, right after the subcommand name,
// so that the later (command-line) value wins under the take-last policy.
std::vector<std::string> expand_config(int argc, char** argv, const std::vector<std::string>& subcommands)
{
    std::vector<std::string> args(argv + 1, argv + argc);
    std::string config;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) {
            config = args[i + 1];
        } else if (args[i].rfind("--config=", 0) == 0) {
            config = args[i].substr(9);
        }
    }
    if (config.empty()) {
        return args;
    }
    const auto sub = std::find_first_of(args.begin(), args.end(), subcommands.begin(), subcommands.end());
    if (sub == args.end()) {
        return args;
    }
    const std::vector<std::string> flags = config_as_flags(load_config(config));
    args.insert(sub + 1, flags.begin(), flags.end());
    return args;
}

ScannerPtr make_scanner(const std::string& name, const Rect& dom)
{
    if (name == "raster") {
        return raster_scan(dom);
    }
    if (name == "column") {
        return raster_scan(dom, RasterOrientation{true, false, false});
    }
    if (name == "serpentine") {
        return serpentine_scan(dom);
    }
    if (name == "hilbert") {
        return hilbert_scan(dom);
    }
    if (name == "odds-then-evens") {
        if (dom.rows != 1) {
            throw InvalidArgument("odds-then-evens needs a 1 x N array");
        }
        return odds_then_evens(dom.cols);
    }
    if (name.rfind("fsm:", 0) == 0) {
        std::ifstream in(name.substr(4));
        if (!in) {
            throw Error("cannot open FSMSCAN file '" + name.substr(4) + "'");
        }
        return std::make_unique<FsmScanner>(read_fsmscan(in), dom);
    }
    throw InvalidArgument("unknown scanner '" + name + "'");
}

FieldSpec make_field(const std::string& kind, double p, const std::string& layout, int tile,
                     const std::string& inner, double inner_p)
{
    auto chain_layout = [](const std::string& l) {
        if (l == "rowwise") {
            return ChainLayout::rowwise;
        }
        if (l == "1d") {
            return ChainLayout::one_d;
        }
        throw InvalidArgument("layout must be rowwise or 1d");
    };
    FieldSpec spec;
    if (kind == "iid") {
        spec = FieldSpec::iid(p);
    } else if (kind == "markov") {
        spec = FieldSpec::markov(p, chain_layout(layout));
    } else if (kind == "shift") {
        spec = FieldSpec::shift();
    } else if (kind == "mixing") {
        spec = FieldSpec::mixing(tile, inner == "iid" ? FieldSpec::iid(inner_p)
                                                      : FieldSpec::markov(inner_p, ChainLayout::rowwise));
    } else {
        throw InvalidArgument("field must be iid, markov, shift or mixing");
    }
    spec.validate();
    return spec;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Scan-and-predict experiments on two-dimensional data arrays"};
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    app.require_subcommand(1);

    std::function<CsvTable()> run_table;
    Common common;
    std::vector<std::string> names;

    auto sub = [&](const std::string& name, const std::string& help, const std::string& columns) {
        CLI::App* cmd = app.add_subcommand(name, help);
        cmd->footer("CSV columns: " + columns);
        add_common(cmd, common);
        names.push_back(name);
        return cmd;
    };

    EpsilonParams eps;
    auto* c_eps = sub("epsilon", "Minimax affine fit of the Bayes envelope (Hamming, squared, log)",
                      "loss,alpha,beta,epsilon,target,tolerance,extremal_points(;-separated),alternations,holds");
    c_eps->add_option("--mesh", eps.mesh, "p grid spacing")->capture_default_str();
    c_eps->callback([&] { run_table = [&] { return run_epsilon(eps); }; });

    Lemma1Params l1;
    auto* c_l1 = sub("lemma1", "Shifted-expansion field under squared loss: five scanners and two opposed rasters",
                     "scanner,mean_total_loss,reference,threshold,holds");
    c_l1->add_option("--n", l1.n, "Array side")->capture_default_str();
    c_l1->add_option("--replicas", l1.replicas, "Number of random arrays")->capture_default_str();
    c_l1->callback([&] {
        l1.seed = common.seed;
        run_table = [&] { return run_lemma1(l1); };
    });

    MarkovExampleParams mx;
    auto* c_mx = sub("markov-example", "Symmetric binary chain: raster vs odds-then-evens with the Bayes predictor",
                     "scanner,per_site_loss,analytic,deviation,holds");
    c_mx->add_option("--p", mx.p, "Flip probability")->capture_default_str()->check(CLI::Range(0.0, 1.0));
    c_mx->add_option("--length", mx.length, "Chain length")->capture_default_str()->check(CLI::PositiveNumber);
    c_mx->add_option("--tolerance", mx.tolerance, "Allowed deviation from the analytic rate")->capture_default_str();
    c_mx->callback([&] {
        mx.seed = common.seed;
        run_table = [&] { return run_markov_example(mx); };
    });

    RegretParams rg;
    TailParams tail;
    std::string mode = "expected";
    auto* c_rg = sub("regret", "Exponential weighting over raster/Markov block experts",
                     "mode=expected: array,kind,min_loss,expected_loss,regret,bound,ratio,max_realized_excess,"
                     "min_weight_slack,runs,violations; mode=tail: target,epsilon,threshold,chernoff_bound,"
                     "freq_realized_minus_expected,freq_excess_over_regret_bound,max_realized_minus_expected,seeds,"
                     "holds");
    c_rg->add_option("--mode", mode, "expected (regret bound) or tail (concentration over seeds)")
        ->capture_default_str()
        ->check(CLI::IsMember({"expected", "tail"}));
    auto* o_n = c_rg->add_option("--n", rg.n, "Array side (tail default 256)")->capture_default_str();
    auto* o_m = c_rg->add_option("--m", rg.m, "Block side (tail default floor(n^(1/4)))")->capture_default_str();
    c_rg->add_option("--experts", rg.experts, "Pool size lambda (1..8)")->capture_default_str();
    c_rg->add_option("--order", rg.order, "Markov order of the experts")->capture_default_str();
    c_rg->add_option("--arrays", rg.arrays, "Random arrays (expected mode)")->capture_default_str();
    auto* o_rep = c_rg->add_option("--replicas", rg.seeds, "Seeds per array (tail: seeds, default 10000)")
                      ->capture_default_str();
    c_rg->add_option("--loss", rg.loss, "hamming, squared or absolute")->capture_default_str();
    c_rg->callback([&] {
        rg.seed = common.seed;
        if (mode == "tail") {
            tail.seed = common.seed;
            tail.experts = rg.experts;
            tail.order = rg.order;
            if (o_n->count()) {
                tail.n = rg.n;
            }
            if (o_m->count()) {
                tail.m = rg.m;
            }
            if (o_rep->count()) {
                tail.seeds = rg.seeds;
            }
            run_table = [&] { return run_regret_tail(tail); };
        } else {
            run_table = [&] { return run_regret(rg); };
        }
    });

    FullPoolParams fp;
    auto* c_fp = sub("theorem3-m2", "Complete pool of 2x2 binary scandictors (576 scanners x 2^15 predictors)",
                     "field,blocks,eta,expected_loss,alg_loss,min_loss,regret,bound,best_scanner,holds");
    c_fp->add_option("--n", fp.n, "Array side")->capture_default_str();
    c_fp->callback([&] {
        fp.seed = common.seed;
        run_table = [&] { return run_theorem3_m2(fp); };
    });

    MixingParams mix;
    auto* c_mix = sub("mixing-as", "Fixed block size on tiled mixing fields of growing size",
                      "n,K,mean_per_site_alg,mean_per_site_expected,mean_per_site_min,max_per_site_regret,"
                      "per_site_bound,fixed_block_mean,fixed_block_mean_variance,holds");
    c_mix->add_option("--m", mix.m, "Block and tile side")->capture_default_str();
    c_mix->add_option("--sizes", mix.sizes, "Array sides")->capture_default_str()->delimiter(',');
    c_mix->add_option("--replicas", mix.replicas, "Arrays per size")->capture_default_str();
    c_mix->add_option("--experts", mix.experts, "Pool size")->capture_default_str();
    c_mix->add_option("--order", mix.order, "Markov order of the experts")->capture_default_str();
    c_mix->callback([&] {
        mix.seed = common.seed;
        run_table = [&] { return run_mixing_as(mix); };
    });

    HilbertParams ph;
    auto* c_ph = sub("ph-vs-raster", "Hilbert scan vs other finite-state scans with fitted order-k tables",
                     "field,scan,per_site_loss,hilbert_loss,excess,two_eps_bound,rho_hat,fmg_bound,tighter,holds");
    c_ph->add_option("--log-side", ph.log_side, "Array side is 2^log-side")->capture_default_str();
    c_ph->add_option("--order", ph.order, "Order of the fitted tables")->capture_default_str();
    c_ph->callback([&] {
        ph.seed = common.seed;
        run_table = [&] { return run_ph_vs_raster(ph); };
    });

    FmgParams fm;
    auto* c_fm = sub("fmg-curve", "Compressibility gap rho/2 - h_b^{-1}(rho)", "rho,gap");
    c_fm->add_option("--mesh", fm.mesh, "rho spacing")->capture_default_str();
    c_fm->callback([&] { run_table = [&] { return run_fmg_curve(fm); }; });

    SandwichParams sw;
    auto* c_sw = sub("sandwich", "Entropy/loss sandwich and scan-pair differences on iid and Markov fields",
                     "kind(known|empirical|pair),field,loss,scan_a,scan_b,entropy_bits_per_site,loss_a,loss_b,"
                     "residual,bound,holds");
    c_sw->add_option("--n", sw.n, "Array side")->capture_default_str();
    c_sw->add_option("--mesh", sw.p_mesh, "Bernoulli parameter spacing")->capture_default_str();
    c_sw->add_option("--markov-p", sw.markov_p, "Flip probability of the Markov fields")->capture_default_str();
    c_sw->add_option("--order", sw.order, "Order of the fitted tables")->capture_default_str();
    c_sw->add_option("--slack", sw.slack, "Added to eps for single residuals")->capture_default_str();
    c_sw->add_option("--pair-slack", sw.pair_slack, "Added to 2 eps for scan pairs")->capture_default_str();
    c_sw->callback([&] {
        sw.seed = common.seed;
        run_table = [&] { return run_sandwich(sw); };
    });

    std::string field = "iid", layout = "rowwise", inner = "markov";
    double p = 0.5, inner_p = 0.1;
    int tile = 4, gen_n = 64;
    auto* c_gen = sub("generate", "Write a random field as an SDGRID file", "(SDGRID output, not CSV)");
    c_gen->add_option("--field", field, "iid, markov, shift or mixing")->capture_default_str();
    c_gen->add_option("--p", p, "Bernoulli or flip probability")->capture_default_str();
    c_gen->add_option("--layout", layout, "Markov layout: rowwise or 1d")->capture_default_str();
    c_gen->add_option("--tile", tile, "Mixing tile side")->capture_default_str();
    c_gen->add_option("--inner", inner, "Mixing tile field: iid or markov")->capture_default_str();
    c_gen->add_option("--inner-p", inner_p, "Mixing tile parameter")->capture_default_str();
    c_gen->add_option("--n", gen_n, "Array side")->capture_default_str();

    std::string in_path, scanner_name = "raster", predictor = "fitted", loss_name = "hamming";
    int order = 2;
    double constant = 0.0;
    auto* c_sc = sub("scandict", "Scan one SDGRID array and report per-step predictions and losses",
                     "step,row,col,value,prediction,loss");
    c_sc->add_option("--in", in_path, "SDGRID input")->required();
    c_sc->add_option("--scanner", scanner_name, "raster, column, serpentine, hilbert, odds-then-evens or fsm:<file>")
        ->capture_default_str();
    c_sc->add_option("--predictor", predictor, "fitted (batch order-k), adaptive (causal order-k) or constant")
        ->capture_default_str()
        ->check(CLI::IsMember({"fitted", "adaptive", "constant"}));
    c_sc->add_option("--k", order, "Markov order")->capture_default_str();
    c_sc->add_option("--loss", loss_name, "hamming, squared, absolute or log")->capture_default_str();
    c_sc->add_option("--value", constant, "Constant prediction")->capture_default_str();

    std::vector<std::string> args;
    try {
        args = expand_config(argc, argv, names);
        std::reverse(args.begin(), args.end());
        app.parse(std::move(args));
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }

    try {
        if (c_gen->parsed()) {
            const FieldSpec spec = make_field(field, p, layout, tile, inner, inner_p);
            const DataArray array = generate(spec, gen_n, common.seed);
            emit(common.out, [&](std::ostream& os) { write_sdgrid(os, array); });
            return 0;
        }
        if (c_sc->parsed()) {
            const DataArray array = load_sdgrid(in_path);
            const LossFn loss = LossFn::from_name(loss_name);
            ScannerPtr scanner = make_scanner(scanner_name, array.bounds());
            ScandictResult result;
            if (predictor == "fitted") {
                const FittedScandict fit = scandict_fitted(array, *scanner, order, loss);
                MarkovPredictor play(std::make_shared<const MarkovTable>(fit.table));
                result = scandict::scandict(array, *scanner, play, loss);
            } else if (predictor == "adaptive") {
                AdaptiveMarkovPredictor play(order, array.alphabet(), loss);
                result = scandict::scandict(array, *scanner, play, loss);
            } else {
                ConstantPredictor play(constant);
                result = scandict::scandict(array, *scanner, play, loss);
            }
            CsvTable t;
            t.claim = "the scan visits every site exactly once; total " + loss.name() +
                      " loss = " + fmt(result.loss) + " (" + fmt(result.loss / static_cast<double>(array.size())) +
                      " per site)";
            t.bound = "coverage violations = 0";
            t.pass = true; // scandict throws on any coverage violation
            t.columns = {"step", "row", "col", "value", "prediction", "loss"};
            for (std::size_t i = 0; i < result.trajectory.size(); ++i) {
                const Site s = result.trajectory.sites[i];
                const double v = result.trajectory.values[i];
                t.add({fmt(i), fmt(s.row), fmt(s.col), fmt(v), fmt(result.predictions[i]),
                       fmt(loss(v, result.predictions[i]))});
            }
            emit(common.out, [&](std::ostream& os) { t.write(os); });
            return 0;
        }
        const CsvTable table = run_table();
        emit(common.out, [&](std::ostream& os) { table.write(os); });
        if (common.out != "-") {
            std::cerr << (table.pass ? "PASS" : "FAIL") << ": " << table.claim << '\n';
        }
        return table.pass ? 0 : 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
