// scv: special values of symmetrized shifted convolution Dirichlet series.
//
// Subcommands:
//   scv eta --power P --scale S --nmax N --out FILE
//   scv kloosterman -m M -n N -c C
//   scv poincare cusp|qplus -m M -k K -N LEVEL -n INDEX [--cmax C --tol T]
//   scv dhat --f1 SPEC --f2 SPEC --h H [--nu NU --s S --terms T]
//   scv lseries --f1 SPEC --f2 SPEC --nu NU --hmax H --terms T [--json|--tsv]
//   scv verify example1|example2|example3 [--terms T --tol EPS --json]
//
// SPEC grammar: "eta:POWER:SCALE" | "poincare:M:K:N" | "file:PATH"
// (file-backed forms additionally need --k1/--k2 for their weights).
//
// Exit codes: 0 on pass, 2 on tolerance failure, 1 on input error.

#include <CLI11.hpp>
#include <json.hpp>

#include "scv/forms.hpp"
#include "scv/kloosterman.hpp"
#include "scv/poincare.hpp"
#include "scv/qseries.hpp"
#include "scv/series_io.hpp"
#include "scv/shiftconv.hpp"
#include "scv/verify.hpp"

#include <cstdio>
#include <iostream>

namespace {

constexpr int kExitPass = 0;
constexpr int kExitInput = 1;
constexpr int kExitTolerance = 2;

struct EtaArgs {
    long power = 0, scale = 0, nmax = 0;
    std::string out;
};

struct KloostermanArgs {
    long m = 0, n = 0, c = 1;
};

struct PoincareArgs {
    long m = 1, N = 1, n = 1;
    int k = 12;
    long cmax = 100000;
    double tol = 1e-6;
};

struct ConvArgs {
    std::string f1, f2;
    long h = 1;
    int nu = 0;
    double s = 0.0;
    bool has_s = false;
    long terms = 100000;
    long hmax = 10;
    double tol = 1e-3;
    long window = 0;
    int k1 = 0, k2 = 0;
    bool json = false, tsv = false;
};

struct VerifyArgs {
    std::string which;
    long terms = 1000000;
    double tol = 0.0;
    long hmax = 10;
    bool json = false;
};

scv::CoefficientTable make_table(const std::string& spec_text, int weight_hint, long nmax,
                                 const scv::SumControl& ctl) {
    std::optional<int> k;
    if (weight_hint > 0) k = weight_hint;
    scv::FormSpec fs = scv::FormSpec::parse(spec_text, k);
    return scv::build_table(fs, nmax, ctl);
}

int run_eta(const EtaArgs& a) {
    scv::QSeries s = scv::eta_power(a.power, a.scale, a.nmax);
    scv::save_series(a.out, s);
    std::printf("wrote eta(%ldtau)^%ld to %s: exponents %ld..%ld\n", a.scale, a.power,
                a.out.c_str(), s.start_exponent(), s.nmax());
    return kExitPass;
}

int run_kloosterman(const KloostermanArgs& a) {
    double v = scv::kloosterman(a.m, a.n, a.c);
    std::printf("K(%ld,%ld,%ld) = %.15g\n", a.m, a.n, a.c, v);
    return kExitPass;
}

int run_poincare(const PoincareArgs& a, bool qplus) {
    scv::PoincareSpec spec{a.m, a.k, a.N, {}};
    spec.control.c_max = a.cmax;
    spec.control.tol = a.tol;
    scv::CoeffResult r = qplus ? scv::qplus_coeff(spec, a.n) : scv::cusp_coeff(spec, a.n);
    std::printf("%s(%s%ld,%d,%ld; n=%ld) = %.15g   (tail <= %.3g, c <= %ld%s)\n",
                qplus ? "Qplus" : "P", qplus ? "-" : "", a.m, a.k, a.N, a.n, r.value,
                r.tail_estimate, r.c_used, r.converged ? "" : ", NOT converged");
    return r.converged ? kExitPass : kExitTolerance;
}

int run_dhat(const ConvArgs& a) {
    scv::SumControl ctl;
    ctl.tol = a.tol;
    ctl.tail_window = a.window;
    scv::CoefficientTable t1 = make_table(a.f1, a.k1, a.terms + a.h + 2, ctl);
    scv::CoefficientTable t2 =
        (a.f2 == a.f1 && a.k1 == a.k2) ? t1 : make_table(a.f2, a.k2, a.terms + a.h + 2, ctl);
    scv::ConvolutionRequest req;
    req.f1 = &t1;
    req.f2 = &t2;
    req.h = a.h;
    req.nu = a.nu;
    if (a.has_s) req.s = a.s;
    req.terms = a.terms;
    req.control = ctl;
    scv::ConvolutionValue v = scv::dhat_nu(req);
    std::printf("Dhat^(%d)(%s, %s, h=%ld; s=%g) = %.12g\n", a.nu, t1.label().c_str(),
                t2.label().c_str(), a.h, a.has_s ? a.s : double(t1.weight() - 1), v.value);
    std::printf("  tail estimate %.3g after %ld terms%s\n", v.tail_estimate, v.terms_used,
                v.converged ? "" : " (NOT converged)");
    return v.converged ? kExitPass : kExitTolerance;
}

int run_lseries(const ConvArgs& a) {
    scv::SumControl ctl;
    ctl.tol = a.tol;
    ctl.tail_window = a.window;
    scv::CoefficientTable t1 = make_table(a.f1, a.k1, a.terms + a.hmax + 2, ctl);
    scv::CoefficientTable t2 =
        (a.f2 == a.f1 && a.k1 == a.k2) ? t1 : make_table(a.f2, a.k2, a.terms + a.hmax + 2, ctl);
    scv::LSeriesResult ls = scv::l_series(t1, t2, a.nu, a.hmax, a.terms, ctl);
    if (a.json) {
        nlohmann::json j;
        j["nu"] = a.nu;
        j["f1"] = t1.label();
        j["f2"] = t2.label();
        j["per_h"] = nlohmann::json::array();
        for (long h = 1; h <= a.hmax; ++h) {
            const auto& v = ls.per_h[size_t(h - 1)];
            j["per_h"].push_back({{"h", h},
                                  {"nu", a.nu},
                                  {"s", double(t1.weight() - 1)},
                                  {"value", v.value},
                                  {"tail_estimate", v.tail_estimate},
                                  {"terms_used", v.terms_used},
                                  {"converged", v.converged}});
        }
        std::cout << j.dump(2) << "\n";
    } else if (a.tsv) {
        std::printf("h\tvalue\ttail_estimate\tterms_used\tconverged\n");
        for (long h = 1; h <= a.hmax; ++h) {
            const auto& v = ls.per_h[size_t(h - 1)];
            std::printf("%ld\t%.12g\t%.3g\t%ld\t%d\n", h, v.value, v.tail_estimate, v.terms_used,
                        int(v.converged));
        }
    } else {
        std::printf("L^(%d)(%s, %s):\n", a.nu, t1.label().c_str(), t2.label().c_str());
        for (long h = 1; h <= a.hmax; ++h) {
            const auto& v = ls.per_h[size_t(h - 1)];
            std::printf("  h=%-3ld %16.8f   (tail %.3g%s)\n", h, v.value, v.tail_estimate,
                        v.converged ? "" : ", NOT converged");
        }
    }
    return ls.converged ? kExitPass : kExitTolerance;
}

int run_verify(const VerifyArgs& a) {
    int which = 0;
    if (a.which == "example1") which = 1;
    else if (a.which == "example2") which = 2;
    else if (a.which == "example3") which = 3;
    else {
        std::cerr << "input error: expected example1|example2|example3\n";
        return kExitInput;
    }
    scv::VerifyOptions opts;
    opts.terms = a.terms;
    opts.tol = a.tol;
    opts.hmax = a.hmax;
    scv::ExampleReport rep = scv::verify_example(which, opts);
    if (a.json) std::cout << scv::to_json(rep) << "\n";
    else std::cout << scv::to_text(rep);
    return rep.pass ? kExitPass : kExitTolerance;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"special values of symmetrized shifted convolution Dirichlet series"};
    app.require_subcommand(1);

    EtaArgs eta;
    auto* eta_cmd = app.add_subcommand("eta", "write an eta-power q-expansion to a coefficient cache");
    eta_cmd->add_option("--power", eta.power, "eta exponent")->required();
    eta_cmd->add_option("--scale", eta.scale, "argument scale (eta(scale*tau))")->required();
    eta_cmd->add_option("--nmax", eta.nmax, "truncation bound")->required();
    eta_cmd->add_option("--out", eta.out, "output cache file")->required();

    KloostermanArgs kl;
    auto* kl_cmd = app.add_subcommand("kloosterman", "evaluate a Kloosterman sum K(m,n,c)");
    kl_cmd->add_option("-m", kl.m)->required();
    kl_cmd->add_option("-n", kl.n)->required();
    kl_cmd->add_option("-c", kl.c)->required();

    PoincareArgs pc;
    auto* pc_cmd = app.add_subcommand("poincare", "Poincare series Fourier coefficients");
    pc_cmd->require_subcommand(1);
    auto* cusp_cmd = pc_cmd->add_subcommand("cusp", "coefficient of q^n in P(m,k,N)");
    auto* qplus_cmd = pc_cmd->add_subcommand("qplus", "coefficient of q^n in normalized Qplus(-m,k,N)");
    for (auto* c : {cusp_cmd, qplus_cmd}) {
        c->add_option("-m", pc.m)->required();
        c->add_option("-k", pc.k)->required();
        c->add_option("-N", pc.N)->required();
        c->add_option("-n", pc.n)->required();
        c->add_option("--cmax", pc.cmax, "Kloosterman modulus cap");
        c->add_option("--tol", pc.tol, "absolute tail target");
    }

    ConvArgs dh;
    auto* dh_cmd = app.add_subcommand("dhat", "symmetrized shifted convolution value Dhat^(nu)(f1,f2,h;s)");
    dh_cmd->set_help_flag("--help", "print help"); // frees -h for the shift option
    dh_cmd->add_option("--f1", dh.f1, "form spec (eta:P:S | poincare:M:K:N | file:PATH)")->required();
    dh_cmd->add_option("--f2", dh.f2, "form spec")->required();
    dh_cmd->add_option("--h", dh.h, "shift")->required();
    dh_cmd->add_option("--nu", dh.nu);
    auto* sopt = dh_cmd->add_option("--s", dh.s, "evaluation point (default k1-1)");
    dh_cmd->add_option("--terms", dh.terms);
    dh_cmd->add_option("--tol", dh.tol, "convergence target for the tail estimate");
    dh_cmd->add_option("--window", dh.window, "tail averaging window (0 = terms/16)");
    dh_cmd->add_option("--k1", dh.k1, "weight of f1 (file specs only)");
    dh_cmd->add_option("--k2", dh.k2, "weight of f2 (file specs only)");

    ConvArgs lsa;
    auto* ls_cmd = app.add_subcommand("lseries", "generating function L^(nu)(f1,f2) coefficients");
    ls_cmd->add_option("--f1", lsa.f1)->required();
    ls_cmd->add_option("--f2", lsa.f2)->required();
    ls_cmd->add_option("--nu", lsa.nu)->required();
    ls_cmd->add_option("--hmax", lsa.hmax)->required();
    ls_cmd->add_option("--terms", lsa.terms)->required();
    ls_cmd->add_option("--tol", lsa.tol);
    ls_cmd->add_option("--window", lsa.window);
    ls_cmd->add_option("--k1", lsa.k1);
    ls_cmd->add_option("--k2", lsa.k2);
    ls_cmd->add_flag("--json", lsa.json);
    ls_cmd->add_flag("--tsv", lsa.tsv);

    VerifyArgs vf;
    auto* vf_cmd = app.add_subcommand("verify", "reproduce a worked example end to end");
    vf_cmd->add_option("example", vf.which, "example1|example2|example3")->required();
    vf_cmd->add_option("--terms", vf.terms);
    vf_cmd->add_option("--tol", vf.tol, "per-row pass tolerance (default: reported estimates)");
    vf_cmd->add_option("--hmax", vf.hmax);
    vf_cmd->add_flag("--json", vf.json);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*eta_cmd) return run_eta(eta);
        if (*kl_cmd) return run_kloosterman(kl);
        if (*pc_cmd) return run_poincare(pc, bool(*qplus_cmd));
        if (*dh_cmd) {
            dh.has_s = sopt->count() > 0;
            return run_dhat(dh);
        }
        if (*ls_cmd) return run_lseries(lsa);
        if (*vf_cmd) return run_verify(vf);
    } catch (const std::invalid_argument& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::out_of_range& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitTolerance;
    }
    return kExitInput;
}
