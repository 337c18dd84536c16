// hlab: command-line front end for the Herglotz-function toolkit.
// Verbs parse typed options, dispatch into the library, and emit CSV/JSON.
// Exit codes: 0 success, 1 input error, 2 mathematical verification failure.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include <CLI11.hpp>

#include "herglotz/errors.hpp"
#include "herglotz/extensions.hpp"
#include "herglotz/herglotz.hpp"
#include "herglotz/json_io.hpp"
#include "herglotz/livsic.hpp"
#include "herglotz/measure.hpp"
#include "herglotz/perturbation.hpp"
#include "herglotz/schrodinger.hpp"
#include "herglotz/verify.hpp"
#include "herglotz/version.hpp"

namespace {

using namespace herglotz;

struct Global {
    double tol = 0.0;
    std::uint64_t seed = 0;
    std::string format = "csv";
    std::string out = "-";
};

cplx parse_complex(const std::string& s) {
    const auto comma = s.find(',');
    if (comma == std::string::npos) throw BadInput("complex values are \"re,im\" pairs: " + s);
    try {
        return {std::stod(s.substr(0, comma)), std::stod(s.substr(comma + 1))};
    } catch (const std::exception&) {
        throw BadInput("cannot parse complex value: " + s);
    }
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw BadInput("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct Output {
    std::ofstream file;
    std::ostream* os = &std::cout;
    explicit Output(const std::string& path) {
        if (path != "-") {
            file.open(path);
            if (!file) throw BadInput("cannot open output " + path);
            os = &file;
        }
    }
    std::ostream& stream() { return *os; }
};

void echo_header(const Global& g) {
    std::cerr << "# hlab " << kVersion << " seed=" << g.seed << " tol=" << g.tol
              << " quad_rel=" << default_tolerances().quad_rel
              << " ode_rel=" << default_tolerances().ode_rel << "\n";
}

void print_value_row(std::ostream& os, cplx z, cplx m) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g", z.real(), z.imag(), m.real(),
                  m.imag());
    os << buf << "\n";
}

Potential load_potential(const std::string& spec, double b_max) {
    if (spec == "zero") return Potential::zero();
    std::ifstream in(spec);
    if (!in) throw BadInput("cannot open potential table " + spec);
    std::vector<double> xs, qs;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream ls(line);
        double x, q;
        if (!(ls >> x >> q)) throw BadInput("potential table rows are \"x,q\": " + line);
        xs.push_back(x);
        qs.push_back(q);
    }
    return Potential::table(std::move(xs), std::move(qs), b_max);
}

// evaluator sources shared by invert/lft/rotate: measure:FILE, livsic:a,alpha,
// weyl:SPEC,gamma, or const-i
std::function<cplx(cplx)> load_source(const std::string& spec) {
    if (spec == "const-i") {
        return [](cplx z) { return z.imag() >= 0.0 ? cplx(0, 1) : cplx(0, -1); };
    }
    if (spec.rfind("measure:", 0) == 0) {
        auto m = std::make_shared<Measure>(measure_from_json(read_file(spec.substr(8))));
        return [m](cplx z) { return eval_scalar(*m, z, Kernel::Full); };
    }
    if (spec.rfind("livsic:", 0) == 0) {
        const std::string rest = spec.substr(7);
        const auto comma = rest.find(',');
        if (comma == std::string::npos) throw BadInput("livsic source is livsic:a,alpha");
        auto model = std::make_shared<LivsicInterval>(std::stod(rest.substr(0, comma)),
                                                      std::stod(rest.substr(comma + 1)));
        return [model](cplx z) { return livsic_rotated_m(*model, z); };
    }
    if (spec.rfind("weyl:", 0) == 0) {
        const std::string rest = spec.substr(5);
        const auto comma = rest.rfind(',');
        if (comma == std::string::npos) throw BadInput("weyl source is weyl:SPEC,gamma");
        auto q = std::make_shared<Potential>(
            load_potential(rest.substr(0, comma), std::numeric_limits<double>::infinity()));
        const double gamma = std::stod(rest.substr(comma + 1));
        return [q, gamma](cplx z) { return weyl_m(*q, BoundaryAngle(gamma), z).value; };
    }
    throw BadInput("unknown source \"" + spec + "\" (measure:FILE, livsic:a,alpha, "
                   "weyl:SPEC,gamma, const-i)");
}

const char* fk_name(FkType t) {
    switch (t) {
        case FkType::Friedrichs: return "friedrichs";
        case FkType::Krein: return "krein";
        case FkType::Both: return "friedrichs_equals_krein";
        case FkType::Neither: return "neither";
    }
    return "?";
}

const char* ext_name(ExtClass t) {
    switch (t) {
        case ExtClass::Friedrichs: return "friedrichs";
        case ExtClass::Krein: return "krein";
        case ExtClass::FriedrichsEqualsKrein: return "friedrichs_equals_krein";
        case ExtClass::Neither: return "neither";
    }
    return "?";
}

std::string verdict_json(const FkVerdict& v) {
    std::ostringstream os;
    os.precision(17);
    os << "{\"type\":\"" << fk_name(v.type) << "\",\"limits\":{\"at_minus_infinity\":"
       << (v.at_minus_infinity.kind == SideVerdict::Kind::Divergent ? "\"divergent\""
                                                                    : "\"convergent\"")
       << ",\"at_zero\":"
       << (v.at_zero.kind == SideVerdict::Kind::Divergent ? "\"divergent\"" : "\"convergent\"")
       << ",\"value_at_minus_infinity\":" << v.at_minus_infinity.limit
       << ",\"value_at_zero\":" << v.at_zero.limit << "},\"confidence\":" << v.confidence
       << ",\"cross_checked\":" << (v.cross_checked ? "true" : "false") << "}";
    return os.str();
}

int run(int argc, char** argv) {
    CLI::App app{"herglotz-lab: Herglotz functions, spectral measures, Weyl m-functions"};
    app.require_subcommand(1);
    Global g;
    app.add_option("--tol", g.tol, "extra tolerance floor for verify suites");
    app.add_option("--seed", g.seed, "seed for seeded spot checks");
    app.add_option("--format", g.format, "output format: csv|json")
        ->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--out", g.out, "output path (default stdout)");

    // ---- eval
    auto* cmd_eval = app.add_subcommand("eval", "evaluate the Herglotz function of a measure");
    std::string eval_measure, eval_kernel = "full", eval_z = "0,1";
    cmd_eval->add_option("--measure", eval_measure, "measure JSON file")->required();
    cmd_eval->add_option("--kernel", eval_kernel, "full|plain")
        ->check(CLI::IsMember({"full", "plain"}));
    cmd_eval->add_option("--z", eval_z, "evaluation point re,im");

    // ---- invert
    auto* cmd_invert = app.add_subcommand("invert", "Stieltjes inversion of an evaluator");
    std::string inv_source, inv_window = "-5,5", inv_eps;
    std::size_t inv_points = 801;
    cmd_invert->add_option("--source", inv_source, "measure:FILE|livsic:a,alpha|weyl:SPEC,g|const-i")
        ->required();
    cmd_invert->add_option("--window", inv_window, "window lo,hi");
    cmd_invert->add_option("--points", inv_points, "number of probe points");
    cmd_invert->add_option("--eps", inv_eps, "comma-separated decreasing ladder");

    // ---- lft / rotate
    auto* cmd_lft = app.add_subcommand("lft", "apply a J-unitary LFT to an evaluator");
    std::string lft_a, lft_source, lft_z = "0,1";
    cmd_lft->add_option("--a", lft_a, "J-unitary JSON file")->required();
    cmd_lft->add_option("--source", lft_source, "evaluator source")->required();
    cmd_lft->add_option("--z", lft_z, "evaluation point re,im");

    auto* cmd_rotate = app.add_subcommand("rotate", "extension rotation of an evaluator");
    std::string rot_source, rot_z = "0,1";
    double rot_theta = 0.0;
    cmd_rotate->add_option("--theta", rot_theta, "rotation angle (radians)")->required();
    cmd_rotate->add_option("--source", rot_source, "evaluator source")->required();
    cmd_rotate->add_option("--z", rot_z, "evaluation point re,im");

    // ---- perturb / dilate / realize
    auto* cmd_perturb = app.add_subcommand("perturb", "M_L(z) of a perturbation triple");
    std::string pert_triple, pert_z = "0,1";
    bool pert_emit = false;
    cmd_perturb->add_option("--triple", pert_triple, "triple JSON file")->required();
    cmd_perturb->add_option("--z", pert_z, "evaluation point re,im");
    cmd_perturb->add_flag("--emit-measure", pert_emit, "emit the spectral measure JSON instead");

    auto* cmd_dilate = app.add_subcommand("dilate", "Naimark dilation of a matrix measure");
    std::string dil_measure;
    cmd_dilate->add_option("--measure", dil_measure, "matrix measure JSON file")->required();

    auto* cmd_realize = app.add_subcommand("realize", "realize a matrix measure and verify");
    std::string real_measure;
    cmd_realize->add_option("--measure", real_measure, "matrix measure JSON file")->required();

    // ---- weyl / donoghue / bounds
    auto* cmd_weyl = app.add_subcommand("weyl", "Weyl m-function of a half-line potential");
    std::string weyl_q = "zero", weyl_z = "0,1";
    double weyl_gamma = 0.0, weyl_bmax = std::numeric_limits<double>::infinity();
    cmd_weyl->add_option("--q", weyl_q, "zero or a two-column CSV table (x,q)");
    cmd_weyl->add_option("--gamma", weyl_gamma, "boundary angle in [0,pi)");
    cmd_weyl->add_option("--z", weyl_z, "evaluation point re,im");
    cmd_weyl->add_option("--b-max", weyl_bmax, "declared integrability cut");

    auto* cmd_don = app.add_subcommand("donoghue", "Donoghue m-function");
    std::string don_model, don_q, don_z = "0,1";
    double don_alpha = 0.0;
    cmd_don->add_option("--model", don_model, "model JSON {measure, alpha}");
    cmd_don->add_option("--q", don_q, "potential (zero|file); Weyl pipeline route");
    cmd_don->add_option("--alpha", don_alpha, "extension angle");
    cmd_don->add_option("--z", don_z, "evaluation point re,im");

    auto* cmd_bounds = app.add_subcommand("bounds", "sharp boundary-functional bounds");
    std::string bounds_q = "zero";
    double bounds_alpha = 0.0;
    cmd_bounds->add_option("--q", bounds_q, "zero or a table file");
    cmd_bounds->add_option("--alpha", bounds_alpha, "extension angle");

    // ---- classify
    auto* cmd_classify = app.add_subcommand("classify", "Friedrichs/Krein classification");
    std::string cls_measure, cls_model;
    cmd_classify->add_option("--measure", cls_measure, "measure JSON (measure-side classifier)");
    cmd_classify->add_option("--model", cls_model, "model JSON (m-side with cross-check)");

    // ---- livsic
    auto* cmd_livsic = app.add_subcommand("livsic", "interval-model Donoghue m-function");
    double liv_a = 1.0, liv_alpha = 0.0;
    std::string liv_z = "0,1";
    cmd_livsic->add_option("--a", liv_a, "interval half-length")->required();
    cmd_livsic->add_option("--alpha", liv_alpha, "extension angle")->required();
    cmd_livsic->add_option("--z", liv_z, "evaluation point re,im");

    auto* cmd_livm = app.add_subcommand("livsic-measure", "interval-model spectral measure");
    double livm_a = 1.0, livm_alpha = 0.0;
    long livm_n = 100;
    cmd_livm->add_option("--a", livm_a, "interval half-length")->required();
    cmd_livm->add_option("--alpha", livm_alpha, "extension angle")->required();
    cmd_livm->add_option("--n", livm_n, "truncation level");

    // ---- verify
    auto* cmd_verify = app.add_subcommand("verify", "run invariant suites");
    std::string ver_suite = "all";
    cmd_verify->add_option("--suite", ver_suite, "all or a module suite name");

    // ---- sweep
    auto* cmd_sweep = app.add_subcommand("sweep", "evaluate a target over a C+ grid");
    std::string sw_target = "eval", sw_measure, sw_re = "-1:1:11", sw_im = "0.5:1.5:11";
    std::string sw_q = "zero";
    double sw_gamma = 0.0, sw_a = 1.0, sw_alpha = 0.0;
    cmd_sweep->add_option("--target", sw_target, "eval|weyl|livsic")
        ->check(CLI::IsMember({"eval", "weyl", "livsic"}));
    cmd_sweep->add_option("--measure", sw_measure, "measure JSON (target eval)");
    cmd_sweep->add_option("--q", sw_q, "potential (target weyl)");
    cmd_sweep->add_option("--gamma", sw_gamma, "boundary angle (target weyl)");
    cmd_sweep->add_option("--a", sw_a, "half-length (target livsic)");
    cmd_sweep->add_option("--alpha", sw_alpha, "angle (target livsic)");
    cmd_sweep->add_option("--re", sw_re, "real grid lo:hi:n");
    cmd_sweep->add_option("--im", sw_im, "imaginary grid lo:hi:n");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;   // exit-code contract: all input errors are 1
    }
    echo_header(g);
    Output out(g.out);

    if (cmd_eval->parsed()) {
        const Measure m = measure_from_json(read_file(eval_measure));
        const cplx z = parse_complex(eval_z);
        const Kernel kern = eval_kernel == "plain" ? Kernel::Plain : Kernel::Full;
        const cplx v = z.imag() == 0.0 ? eval_scalar_real(m, z.real(), kern)
                                       : eval_scalar(m, z, kern);
        out.stream() << "re_z,im_z,re_M,im_M\n";
        print_value_row(out.stream(), z, v);
        return 0;
    }

    if (cmd_invert->parsed()) {
        const auto comma = inv_window.find(',');
        if (comma == std::string::npos) throw BadInput("window is lo,hi");
        const double lo = std::stod(inv_window.substr(0, comma));
        const double hi = std::stod(inv_window.substr(comma + 1));
        InversionOptions opt;
        opt.probes = inv_points;
        if (!inv_eps.empty()) {
            opt.eps_ladder.clear();
            std::istringstream ss(inv_eps);
            std::string tok;
            while (std::getline(ss, tok, ',')) opt.eps_ladder.push_back(std::stod(tok));
        }
        const Measure rec = stieltjes_invert(load_source(inv_source), lo, hi, opt);
        if (g.format == "json") {
            out.stream() << measure_to_json(rec) << "\n";
            return 0;
        }
        out.stream() << "lambda,density,atom_mass\n";
        std::size_t ai = 0;
        char buf[120];
        for (std::size_t i = 0; i < rec.grid().size(); ++i) {
            while (ai < rec.atoms().size() && rec.atoms()[ai].x <= rec.grid()[i]) {
                std::snprintf(buf, sizeof buf, "%.17g,0,%.17g", rec.atoms()[ai].x,
                              rec.atoms()[ai].m);
                out.stream() << buf << "\n";
                ++ai;
            }
            std::snprintf(buf, sizeof buf, "%.17g,%.17g,0", rec.grid()[i], rec.values()[i]);
            out.stream() << buf << "\n";
        }
        for (; ai < rec.atoms().size(); ++ai) {
            std::snprintf(buf, sizeof buf, "%.17g,0,%.17g", rec.atoms()[ai].x, rec.atoms()[ai].m);
            out.stream() << buf << "\n";
        }
        return 0;
    }

    if (cmd_lft->parsed()) {
        const JUnitary a = junitary_from_json(read_file(lft_a));
        const cplx z = parse_complex(lft_z);
        const cplx v = lft_apply(a, load_source(lft_source)(z));
        out.stream() << "re_z,im_z,re_M,im_M\n";
        print_value_row(out.stream(), z, v);
        return 0;
    }

    if (cmd_rotate->parsed()) {
        const cplx z = parse_complex(rot_z);
        const cplx v = rotate_value(load_source(rot_source)(z), rot_theta);
        out.stream() << "re_z,im_z,re_M,im_M\n";
        print_value_row(out.stream(), z, v);
        return 0;
    }

    if (cmd_perturb->parsed()) {
        const PerturbationTriple t = triple_from_json(read_file(pert_triple));
        if (pert_emit) {
            out.stream() << matrix_measure_to_json(spectral_measure(t)) << "\n";
            return 0;
        }
        const cplx z = parse_complex(pert_z);
        const CMat m = perturbed_mfunc(t, z);
        out.stream() << "re_z,im_z,row,col,re_M,im_M\n";
        char buf[200];
        for (std::size_t i = 0; i < m.rows(); ++i)
            for (std::size_t j = 0; j < m.cols(); ++j) {
                std::snprintf(buf, sizeof buf, "%.17g,%.17g,%zu,%zu,%.17g,%.17g", z.real(),
                              z.imag(), i, j, m(i, j).real(), m(i, j).imag());
                out.stream() << buf << "\n";
            }
        return 0;
    }

    if (cmd_dilate->parsed()) {
        const MatrixMeasure m = matrix_measure_from_json(read_file(dil_measure));
        out.stream() << dilation_to_json(naimark_dilate(m)) << "\n";
        return 0;
    }

    if (cmd_realize->parsed()) {
        const MatrixMeasure m = matrix_measure_from_json(read_file(real_measure));
        const RealizationReport rep = realize(m);
        out.stream() << dilation_to_json(rep.dilation) << "\n";
        std::cerr << "# realize residual " << rep.max_residual << "\n";
        if (!(rep.max_residual <= 1e-10))
            throw VerificationError("perturbation.RealizationResidual",
                                    "realization residual exceeds 1e-10");
        return 0;
    }

    if (cmd_weyl->parsed()) {
        const Potential q = load_potential(weyl_q, weyl_bmax);
        const cplx z = parse_complex(weyl_z);
        const WeylResult r = weyl_m(q, BoundaryAngle(weyl_gamma), z);
        out.stream() << "re_z,im_z,re_m,im_m,err_est\n";
        char buf[200];
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.3g", z.real(), z.imag(),
                      r.value.real(), r.value.imag(), r.richardson_error);
        out.stream() << buf << "\n";
        return 0;
    }

    if (cmd_don->parsed()) {
        const cplx z = parse_complex(don_z);
        cplx v;
        if (!don_model.empty()) {
            const ModelInput in = model_from_json(read_file(don_model));
            v = donoghue_m(DonoghueModel(in.measure, in.alpha), z);
        } else if (!don_q.empty()) {
            v = weyl_to_donoghue(load_potential(don_q, std::numeric_limits<double>::infinity()),
                                 don_alpha, z);
        } else {
            throw BadInput("donoghue needs --model or --q");
        }
        out.stream() << "re_z,im_z,re_m,im_m\n";
        print_value_row(out.stream(), z, v);
        return 0;
    }

    if (cmd_bounds->parsed()) {
        const SharpBounds b =
            sharp_bounds(load_potential(bounds_q, std::numeric_limits<double>::infinity()),
                         bounds_alpha);
        out.stream().precision(17);
        out.stream() << "{\"sup_derivative\":" << b.sup_derivative
                     << ",\"sup_value\":" << b.sup_value << ",\"product\":" << b.product
                     << ",\"sobolev_constant\":" << b.sobolev_constant
                     << ",\"variational\":" << b.variational << "}\n";
        return 0;
    }

    if (cmd_classify->parsed()) {
        if (!cls_model.empty()) {
            const ModelInput in = model_from_json(read_file(cls_model));
            const FkVerdict v = identify_friedrichs_krein(DonoghueModel(in.measure, in.alpha));
            out.stream() << verdict_json(v) << "\n";
            return 0;
        }
        if (cls_measure.empty()) throw BadInput("classify needs --measure or --model");
        const ExtClass c = classify_extension_type(measure_from_json(read_file(cls_measure)));
        out.stream() << "{\"type\":\"" << ext_name(c) << "\",\"limits\":{},\"confidence\":1}\n";
        return 0;
    }

    if (cmd_livsic->parsed()) {
        const LivsicInterval model(liv_a, liv_alpha);
        const cplx z = parse_complex(liv_z);
        out.stream() << "re_z,im_z,re_m,im_m\n";
        print_value_row(out.stream(), z, livsic_rotated_m(model, z));
        return 0;
    }

    if (cmd_livm->parsed()) {
        const LivsicInterval model(livm_a, livm_alpha);
        out.stream() << measure_to_json(livsic_measure(model, livm_n)) << "\n";
        return 0;
    }

    if (cmd_verify->parsed()) {
        const auto results = run_suite(ver_suite, g.seed, g.tol);
        bool ok = true;
        for (const SuiteResult& r : results) {
            ok = ok && r.pass;
            out.stream() << (r.pass ? "[PASS] " : "[FAIL] ") << r.name << ": " << r.detail << "\n";
        }
        if (!ok) throw VerificationError("verify.SuiteFailure", "at least one check failed");
        return 0;
    }

    if (cmd_sweep->parsed()) {
        auto parse_axis = [](const std::string& s) {
            double lo, hi;
            std::size_t n;
            char c1, c2;
            std::istringstream ss(s);
            if (!(ss >> lo >> c1 >> hi >> c2 >> n) || c1 != ':' || c2 != ':' || n < 1)
                throw BadInput("grid axis is lo:hi:n");
            return std::tuple<double, double, std::size_t>{lo, hi, n};
        };
        const auto [rlo, rhi, rn] = parse_axis(sw_re);
        const auto [ilo, ihi, in] = parse_axis(sw_im);
        if (rn * in > 1000000) throw GridTooLarge("sweep grid exceeds 1e6 points");
        if (!(ilo > 0.0)) throw BadInput("sweep grid must lie in C+");

        // the weyl target carries its ladder error estimate as a fifth column
        std::function<std::pair<cplx, double>(cplx)> f;
        bool with_err = false;
        if (sw_target == "eval") {
            if (sw_measure.empty()) throw BadInput("sweep --target eval needs --measure");
            auto m = std::make_shared<Measure>(measure_from_json(read_file(sw_measure)));
            f = [m](cplx z) { return std::pair{eval_scalar(*m, z, Kernel::Full), 0.0}; };
        } else if (sw_target == "weyl") {
            auto q = std::make_shared<Potential>(
                load_potential(sw_q, std::numeric_limits<double>::infinity()));
            const double gm = sw_gamma;
            with_err = true;
            f = [q, gm](cplx z) {
                const WeylResult r = weyl_m(*q, BoundaryAngle(gm), z);
                return std::pair{r.value, r.richardson_error};
            };
        } else {
            auto model = std::make_shared<LivsicInterval>(sw_a, sw_alpha);
            f = [model](cplx z) { return std::pair{livsic_rotated_m(*model, z), 0.0}; };
        }

        out.stream() << (with_err ? "re_z,im_z,re_m,im_m,err_est\n" : "re_z,im_z,re_M,im_M\n");
        char buf[200];
        for (std::size_t i = 0; i < in; ++i) {
            const double y = in == 1 ? ilo : ilo + (ihi - ilo) * double(i) / double(in - 1);
            for (std::size_t r = 0; r < rn; ++r) {
                const double x = rn == 1 ? rlo : rlo + (rhi - rlo) * double(r) / double(rn - 1);
                const auto [v, err] = f({x, y});
                if (with_err) {
                    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.3g", x, y,
                                  v.real(), v.imag(), err);
                    out.stream() << buf << "\n";
                } else {
                    print_value_row(out.stream(), {x, y}, v);
                }
            }
            out.stream().flush();
        }
        return 0;
    }

    throw BadInput("no subcommand dispatched");
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const herglotz::VerificationError& e) {
        std::cerr << "verification failure: " << e.code() << ": " << e.what() << "\n";
        return 2;
    } catch (const herglotz::Error& e) {
        std::cerr << "error: " << e.code() << ": " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
