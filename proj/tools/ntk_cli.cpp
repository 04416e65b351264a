// Command-line front end: one JSON report per invocation (CSV for sweeps).
#include "CLI11.hpp"
#include "json.hpp"

#include "ntk/characters.hpp"
#include "ntk/eisenstein.hpp"
#include "ntk/field.hpp"
#include "ntk/kloosterman.hpp"
#include "ntk/kuznetsov.hpp"
#include "ntk/shifted_conv.hpp"
#include "ntk/spectral.hpp"
#include "ntk/whittaker.hpp"

#include <algorithm>
#include <chrono>
#include <iostream>
#include <limits>
#include <sstream>

using json = nlohmann::ordered_json;
using namespace ntk;

namespace {

constexpr int kExitDomain = 2;
constexpr int kExitUsage = 64;

struct Common {
    i64 D = 1;
    double tol = 1e-10;
    i64 bound = 0;
    std::uint64_t seed = 1;
    int jobs = 1;
    std::string format = "json";
    bool deterministic = false;
};

void add_common(CLI::App* s, Common& c) {
    s->add_option("--field,--D", c.D, "squarefree D (1 for Q)");
    s->add_option("--tol", c.tol, "target tolerance")->check(CLI::PositiveNumber);
    s->add_option("--bound", c.bound, "enumeration bound (0: command default)");
    s->add_option("--seed", c.seed, "seed for synthetic systems");
    s->add_option("--jobs", c.jobs, "worker threads")->check(CLI::Range(1, 256));
    s->add_option("--format", c.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    s->add_flag("--deterministic", c.deterministic, "report elapsed_ms as 0");
}

json cj(cplx z) { return json{{"re", z.real()}, {"im", z.imag()}}; }

json elem_json(const Field& K, Elem x) { return json{{"a", x.a}, {"b", x.b}, {"text", K.to_string(x)}}; }

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, sep)) out.push_back(tok);
    return out;
}

// "3", "1.5i", "0.5+2i", "-1-0.25i", "i"
cplx parse_complex(std::string s) {
    s.erase(std::remove(s.begin(), s.end(), ' '), s.end());
    auto num = [&](const std::string& t) {
        size_t used = 0;
        double v = std::stod(t, &used);
        if (used != t.size()) throw std::invalid_argument("cannot parse complex number '" + s + "'");
        return v;
    };
    if (s.empty()) throw std::invalid_argument("empty complex number");
    if (s.back() != 'i') return {num(s), 0.0};
    std::string body = s.substr(0, s.size() - 1);
    // split at the last sign that is not a leading sign or an exponent sign
    size_t cut = std::string::npos;
    for (size_t k = body.size(); k-- > 1;)
        if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
            cut = k;
            break;
        }
    std::string re = cut == std::string::npos ? "" : body.substr(0, cut);
    std::string im = cut == std::string::npos ? body : body.substr(cut);
    double b = (im.empty() || im == "+") ? 1.0 : im == "-" ? -1.0 : num(im);
    return {re.empty() ? 0.0 : num(re), b};
}

// "a" or "a,b" (coordinates on 1, w)
Elem parse_elem(const std::string& s) {
    auto p = split(s, ',');
    if (p.empty() || p.size() > 2) throw std::invalid_argument("element must be 'a' or 'a,b'");
    return {std::stoll(p[0]), p.size() == 2 ? std::stoll(p[1]) : 0};
}

// "P<p>" or "P<p>.<k>" for the k-th prime above p, else an element generating a principal ideal
Ideal parse_ideal(const Field& K, const std::string& s) {
    if (!s.empty() && (s[0] == 'P' || s[0] == 'p')) {
        auto p = split(s.substr(1), '.');
        auto ps = K.primes_above(std::stoll(p.at(0)));
        size_t k = p.size() > 1 ? std::stoul(p[1]) : 0;
        if (k >= ps.size()) throw std::invalid_argument("no such prime above " + p[0]);
        return ps[k].ideal;
    }
    return K.principal(parse_elem(s));
}

json ideal_json(const Field& K, const Ideal& I) {
    json j{{"text", K.to_string(I)}, {"hnf", {I.A, I.B, I.C}}};
    if (I.integral()) j["norm"] = K.norm(I);
    return j;
}

std::string surd_string(const QuadSurd& x) {
    std::ostringstream os;
    os << x.a.str();
    if (x.b != 0) os << " + (" << x.b.str() << ")*sqrt(" << x.N << ")";
    return os.str();
}

struct CharSpec {
    std::string modulus = "1";
    std::string exponents;
    std::string s;
};

void add_char(CLI::App* sub, CharSpec& c) {
    sub->add_option("--chi-mod", c.modulus, "character modulus (ideal)");
    sub->add_option("--chi-exp", c.exponents, "finite exponents, comma separated");
    sub->add_option("--chi-s", c.s, "archimedean exponents, comma separated complex");
}

HeckeCharacter make_character(const Field& K, const CharSpec& c) {
    Ideal q = parse_ideal(K, c.modulus);
    auto G = std::make_shared<const UnitGroup>(K, q);
    std::vector<i64> m;
    if (!c.exponents.empty())
        for (auto& t : split(c.exponents, ',')) m.push_back(std::stoll(t));
    if (m.empty()) m.assign(G->invariants().size(), 0);
    std::vector<cplx> s;
    if (!c.s.empty())
        for (auto& t : split(c.s, ',')) s.push_back(parse_complex(t));
    if (s.empty()) s.assign(K.degree(), 0.0);
    return HeckeCharacter(K, FiniteCharacter(G, m), s);
}

json char_json(const Field& K, const HeckeCharacter& chi) {
    json e = json::array();
    for (auto s : chi.exponents()) e.push_back(cj(s));
    return json{{"modulus", ideal_json(K, chi.finite().modulus())},
                {"exponents", chi.finite().index()},
                {"s", e},
                {"unit_residual", chi.unit_residual()}};
}

EigenvalueSystem make_system(const Field& K, const std::string& kind, std::uint64_t seed) {
    if (kind == "divisor") return EigenvalueSystem::divisor(K);
    if (kind == "synthetic") return EigenvalueSystem::synthetic(K, seed);
    if (kind == "exceptional") return EigenvalueSystem::synthetic(K, seed, true);
    throw std::invalid_argument("unknown system '" + kind + "'");
}

std::vector<double> parse_reals(const std::string& s, int d, const char* what) {
    std::vector<double> v;
    for (auto& t : split(s, ',')) v.push_back(std::stod(t));
    if (v.size() == 1) v.assign(d, v[0]);
    if ((int)v.size() != d) throw std::invalid_argument(std::string(what) + ": wrong number of components");
    return v;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"number-field toolkit"};
    app.require_subcommand(1);
    Common C;

    // field
    auto* field = app.add_subcommand("field", "field data");
    auto* field_info = field->add_subcommand("info", "discriminant, units, class number");
    add_common(field_info, C);
    field->require_subcommand(1);

    // chars
    auto* chars = app.add_subcommand("chars", "finite and Hecke characters");
    chars->require_subcommand(1);
    std::string modulus = "1", level = "1";
    double X = 5, resolution = 1;
    auto* chars_list = chars->add_subcommand("list", "characters mod an ideal");
    add_common(chars_list, C);
    chars_list->add_option("--modulus", modulus, "ideal")->required();
    auto* chars_eis = chars->add_subcommand("eisen-count", "Eisenstein parameter branches");
    add_common(chars_eis, C);
    chars_eis->add_option("--level", level, "level ideal")->required();
    chars_eis->add_option("--X", X, "bound on |s1 - s2| and |y|");
    chars_eis->add_option("--resolution", resolution, "grid step in y");

    // whittaker
    auto* wh = app.add_subcommand("whittaker", "archimedean Whittaker functions");
    wh->require_subcommand(1);
    int wq = 0, qmax = 4, parity = 0;
    std::string nu_s = "0";
    double wy = 1;
    auto* wh_eval = wh->add_subcommand("eval", "normalised W_q at one point");
    add_common(wh_eval, C);
    wh_eval->add_option("--q", wq, "weight index");
    wh_eval->add_option("--nu", nu_s, "spectral parameter, complex");
    wh_eval->add_option("--y", wy, "point, nonzero");
    auto* wh_gram = wh->add_subcommand("gram", "Gram matrix of one parity class");
    add_common(wh_gram, C);
    wh_gram->add_option("--nu,--numax", nu_s, "spectral parameter, complex");
    wh_gram->add_option("--qmax", qmax, "largest |q|");
    wh_gram->add_option("--parity", parity, "0 or 1")->check(CLI::IsMember({0, 1}));

    // kloosterman
    auto* kl = app.add_subcommand("kloosterman", "Kloosterman sums and Weil margins");
    add_common(kl, C);
    std::string r1s = "1", r2s = "1", cs = "1", rs_list = "1,2,3";
    i64 cmax = 100;
    kl->add_option("--r1", r1s, "element");
    kl->add_option("--r2", r2s, "element");
    kl->add_option("--c", cs, "nonzero modulus element");
    auto* kl_sweep = kl->add_subcommand("sweep", "all moduli up to a norm");
    add_common(kl_sweep, C);
    kl_sweep->add_option("--cmax", cmax, "largest modulus norm");
    kl_sweep->add_option("--rs", rs_list, "r values (rational integers)");
    kl_sweep->add_option("--out", C.format, "output format (alias of --format)")->check(CLI::IsMember({"json", "csv"}));

    // eisen
    auto* eis = app.add_subcommand("eisen", "Eisenstein local data and constant term");
    eis->require_subcommand(1);
    i64 localN = 2;
    int nmax = 4, mcond = 0;
    std::string tstr = "1", mstr = "1";
    bool numeric_check = false;
    CharSpec chi_spec;
    auto* eis_dim = eis->add_subcommand("dim", "local dimensions n - m + 1");
    add_common(eis_dim, C);
    eis_dim->add_option("--nmax", nmax, "largest exponent");
    auto* eis_norms = eis->add_subcommand("norms", "exact local norms and inner products");
    add_common(eis_norms, C);
    eis_norms->add_option("--N", localN, "residue field size");
    eis_norms->add_option("--m", mcond, "conductor exponent");
    eis_norms->add_option("--jmax", nmax, "largest shift index");
    auto* eis_coeff = eis->add_subcommand("coeff", "oldform Fourier coefficient");
    add_common(eis_coeff, C);
    add_char(eis_coeff, chi_spec);
    eis_coeff->add_option("--t", tstr, "shift ideal");
    eis_coeff->add_option("--m", mstr, "coefficient ideal");
    auto* eis_ct = eis->add_subcommand("constterm", "H(1/2) at a level");
    add_common(eis_ct, C);
    eis_ct->add_option("--level", level, "level ideal");
    eis_ct->add_flag("--check", numeric_check, "also run the extrapolated numerical check");

    // spectral
    auto* sp = app.add_subcommand("spectral", "eigenvalue systems, Bessel transforms, Kuznetsov");
    sp->require_subcommand(1);
    std::string system = "synthetic";
    double Z = 1, tval = 1;
    bool tilde = false;
    i64 height = 100;
    auto* sp_old = sp->add_subcommand("oldforms", "orthonormal oldform basis");
    add_common(sp_old, C);
    sp_old->add_option("--level", level, "level ideal");
    sp_old->add_option("--system", system, "divisor, synthetic or exceptional");
    auto* sp_bes = sp->add_subcommand("bessel", "transforms of k_Z");
    add_common(sp_bes, C);
    sp_bes->add_option("--Z", Z, "test function scale");
    sp_bes->add_option("--t", tval, "argument, nonzero");
    sp_bes->add_flag("--tilde", tilde, "the constant transform instead");
    auto* sp_kuz = sp->add_subcommand("kuz-geom", "geometric side of the Kuznetsov formula");
    add_common(sp_kuz, C);
    sp_kuz->add_option("--r1", r1s, "element");
    sp_kuz->add_option("--r2", r2s, "element");
    sp_kuz->add_option("--level", level, "ideal containing the moduli");
    sp_kuz->add_option("--height", height, "largest modulus norm");
    sp_kuz->add_option("--Z", Z, "test function scale");

    // shifted
    auto* sh = app.add_subcommand("shifted", "shifted convolution sums and the amplified moment");
    sh->require_subcommand(1);
    std::string l1s = "1", l2s = "1", qs = "1", Ys = "10", ss = "2", ystr = "1", system2 = "";
    double lo = 0.5, hi = 2, L = 5, Yreal = 50;
    int beta = 134;
    std::uint64_t seed2 = 2;
    auto add_pair = [&](CLI::App* s) {
        s->add_option("--system", system, "divisor, synthetic or exceptional");
        s->add_option("--system2", system2, "second system (defaults to the first)");
        s->add_option("--seed2", seed2, "seed of the second synthetic system");
        s->add_option("--l1", l1s, "totally positive element");
        s->add_option("--l2", l2s, "totally positive element");
        s->add_option("--q", qs, "nonzero shift element");
        s->add_option("--y", ystr, "ideal y");
    };
    auto* sh_sum = sh->add_subcommand("sum", "shifted convolution sum with bump weights");
    add_common(sh_sum, C);
    add_pair(sh_sum);
    sh_sum->add_option("--Y", Ys, "scale per place");
    sh_sum->add_option("--lo", lo, "bump support start");
    sh_sum->add_option("--hi", hi, "bump support end");
    auto* sh_dir = sh->add_subcommand("dirichlet", "Dirichlet series in Re s > 1");
    add_common(sh_dir, C);
    add_pair(sh_dir);
    sh_dir->add_option("--s", ss, "comma separated complex");
    sh_dir->add_option("--beta", beta, "even, at least 2");
    sh_dir->add_option("--height", Yreal, "truncation height");
    auto* sh_amp = sh->add_subcommand("amplify", "amplified second moment");
    add_common(sh_amp, C);
    add_char(sh_amp, chi_spec);
    sh_amp->add_option("--system", system, "divisor, synthetic or exceptional");
    sh_amp->add_option("--modulus", modulus, "ideal q");
    sh_amp->add_option("--L", L, "amplifier primes have norm in [L, 2L]");
    sh_amp->add_option("--Y", Yreal, "length of the sum");
    auto* sh_afe = sh->add_subcommand("afe", "smoothed central sum");
    add_common(sh_afe, C);
    add_char(sh_afe, chi_spec);
    sh_afe->add_option("--system", system, "divisor, synthetic or exceptional");
    sh_afe->add_option("--Y", Yreal, "length of the sum");

    // Unknown top-level subcommands are a usage error distinct from bad parameters.
    if (argc > 1 && argv[1][0] != '-' && !app.get_subcommand_no_throw(argv[1])) {
        std::cout << json{{"schema", 1}, {"error", std::string("unknown subcommand '") + argv[1] + "'"}}.dump(2)
                  << "\n";
        return kExitUsage;
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cout << json{{"schema", 1}, {"error", e.what()}}.dump(2) << "\n";
        return std::string(e.get_name()) == "ExtrasError" ? kExitUsage : kExitDomain;
    }

    // path of the leaf command
    std::string command;
    CLI::App* leaf = &app;
    while (!leaf->get_subcommands().empty()) {
        leaf = leaf->get_subcommands().front();
        command += (command.empty() ? "" : " ") + leaf->get_name();
    }
    json inputs = json::object();
    for (const CLI::Option* o : leaf->get_options()) {
        if (o->get_name() == "--help" || o->count() == 0) continue;
        auto r = o->results();
        inputs[o->get_name().substr(2)] = r.size() == 1 ? json(r[0]) : json(r);
    }

    auto t0 = std::chrono::steady_clock::now();
    json result, cert = json::object();
    std::string csv;
    try {
        auto Kp = Field::make(C.D);
        const Field& K = *Kp;
        int d = K.degree();

        if (leaf == field_info) {
            result = {{"D", K.D()},
                      {"degree", d},
                      {"disc", K.disc()},
                      {"omega", d == 1 ? "1" : (K.D() % 4 == 1 ? "(1+sqrt D)/2" : "sqrt D")},
                      {"fundamental_unit", elem_json(K, K.fundamental_unit())},
                      {"unit_norm", K.fundamental_unit_norm()},
                      {"positive_unit", elem_json(K, K.positive_unit())},
                      {"regulator", (double)K.regulator()},
                      {"class_number", K.class_number()},
                      {"different", ideal_json(K, K.different())}};
            if (auto g = K.different_generator()) result["different_generator"] = elem_json(K, *g);
        } else if (leaf == chars_list) {
            Ideal q = parse_ideal(K, modulus);
            result = json::array();
            for (const auto& chi : characters_mod(K, q, C.bound > 0 ? C.bound : 1000000)) {
                json e{{"exponents", chi.index()}, {"order", chi.order()}, {"conductor", ideal_json(K, chi.conductor())}};
                auto sgn = chi.exponent_at(Elem{-1, 0});
                e["even"] = sgn && *sgn == 0;
                result.push_back(e);
            }
        } else if (leaf == chars_eis) {
            auto cnt = enumerate_eisenstein_pairs(K, parse_ideal(K, level), X, resolution);
            json br = json::array();
            for (auto& b : cnt.branches)
                br.push_back({{"character", b.character}, {"conductor", ideal_json(K, b.conductor)}, {"k", b.k}, {"delta", b.delta}});
            result = {{"c1", ideal_json(K, cnt.c1)}, {"branches", br}, {"grid_points", cnt.grid_points}, {"total", cnt.total}};
        } else if (leaf == wh_eval) {
            cplx nu = parse_complex(nu_s);
            result = {{"value", cj(normalized_whittaker(wq, nu, wy))}, {"admissible", whittaker_admissible(wq, nu)}};
        } else if (leaf == wh_gram) {
            auto G = whittaker_gram(qmax, parse_complex(nu_s), parity, C.tol);
            cert["deviation"] = G.deviation();
            if (C.format == "csv") {
                std::ostringstream os;
                os << "q1,q2,re,im\n";
                os.precision(17);
                for (size_t i = 0; i < G.q.size(); ++i)
                    for (size_t j = 0; j < G.q.size(); ++j)
                        os << G.q[i] << "," << G.q[j] << "," << G.G[i][j].real() << "," << G.G[i][j].imag() << "\n";
                csv = os.str();
            }
            json rows = json::array();
            for (auto& row : G.G) {
                json r = json::array();
                for (auto z : row) r.push_back(cj(z));
                rows.push_back(r);
            }
            result = {{"q", G.q}, {"gram", rows}};
        } else if (leaf == kl) {
            KloostermanQuery q{parse_elem(r1s), parse_elem(r2s), parse_elem(cs), std::nullopt};
            cplx S = kloosterman_sum(K, q);
            auto w = weil_margin(K, q, S);
            result = {{"value", S.real()}, {"imag", S.imag()}, {"abs", w.abs_S}, {"margin", w.margin}};
            cert = {{"tau", w.tau}, {"gcd_norm", w.gcd_norm}, {"c_norm", w.c_norm}};
        } else if (leaf == kl_sweep) {
            std::vector<Elem> rs;
            for (auto& t : split(rs_list, ',')) rs.push_back({std::stoll(t), 0});
            auto rows = kloosterman_sweep(K, cmax, rs, C.jobs);
            double worst = 0;
            std::ostringstream os;
            os.precision(17);
            os << "c_norm,c,r1,r2,S_re,S_im,margin\n";
            json arr = json::array();
            for (auto& r : rows) {
                worst = std::max(worst, r.margin);
                os << r.c_norm << ",\"" << K.to_string(r.c) << "\"," << K.to_string(r.r1) << "," << K.to_string(r.r2) << ","
                   << r.S.real() << "," << r.S.imag() << "," << r.margin << "\n";
                arr.push_back({{"c_norm", r.c_norm}, {"c", K.to_string(r.c)}, {"r1", K.to_string(r.r1)},
                               {"r2", K.to_string(r.r2)}, {"S", cj(r.S)}, {"margin", r.margin}});
            }
            csv = os.str();
            result = {{"rows", arr}};
            cert = {{"max_margin", worst}, {"count", rows.size()}};
        } else if (leaf == eis_dim) {
            result = json::array();
            for (int n = 0; n <= nmax; ++n)
                for (int m = 0; m <= n; ++m) result.push_back({{"n", n}, {"m", m}, {"dim", local_dimension(n, m)}});
        } else if (leaf == eis_norms) {
            json vecs = json::array(), inner = json::array();
            for (int j = 0; j <= nmax; ++j) {
                LocalVectorSpec s{localN, j, mcond};
                vecs.push_back({{"j", j}, {"norm_sq", local_vector_norm_sq(s).str()}});
                json row = json::array();
                for (int i = 0; i <= nmax; ++i) row.push_back(surd_string(local_inner_product(s, LocalVectorSpec{localN, i, mcond})));
                inner.push_back(row);
            }
            result = {{"N", localN}, {"m", mcond}, {"vectors", vecs}, {"inner_products", inner}};
        } else if (leaf == eis_coeff) {
            auto chi = make_character(K, chi_spec);
            EisContext ctx(K, chi, parse_ideal(K, tstr));
            Ideal m = parse_ideal(K, mstr);
            result = {{"character", char_json(K, chi)},
                      {"t", ideal_json(K, ctx.t())},
                      {"m", ideal_json(K, m)},
                      {"lambda", cj(ctx.lambda(m))},
                      {"oldform_coefficient", cj(ctx.oldform_coefficient(m))},
                      {"F", ctx.F()}};
        } else if (leaf == eis_ct) {
            Ideal c = parse_ideal(K, level);
            auto H = constant_term_H_at_half(K, c);
            result = {{"level", ideal_json(K, c)}, {"H_half", H.str()}, {"coset_index", coset_index(K, c)}};
            if (numeric_check) {
                auto h = constant_term_H_check(K, c);
                cert = {{"H_delta1", h.H_delta1}, {"H_delta2", h.H_delta2}, {"extrapolated", h.extrapolated},
                        {"rel_error", h.rel_error}};
            }
        } else if (leaf == sp_old) {
            auto sys = make_system(K, system, C.seed);
            auto B = oldform_gram_schmidt(sys, parse_ideal(K, level));
            json ts = json::array(), al = json::array();
            for (size_t i = 0; i < B.t.size(); ++i) {
                ts.push_back(ideal_json(K, B.t[i]));
                json row = json::array();
                for (auto z : B.alpha[i]) row.push_back(cj(z));
                al.push_back(row);
            }
            result = {{"system", sys.describe()}, {"t", ts}, {"alpha", al}};
            cert = {{"gram_deviation", B.gram_deviation}, {"local_series_tail", 1e-12}};
        } else if (leaf == sp_bes) {
            auto k = TestFunction::kZ(Z);
            auto v = tilde ? bessel_tilde(k) : bessel_check(k, tval);
            result = {{"value", v.value}};
            cert = {{"tail_bound", v.tail_bound}, {"discretisation", v.discretisation}, {"T", v.T},
                    {"nodes", v.nodes}, {"max_bits", v.max_bits}};
        } else if (leaf == sp_kuz) {
            KuzQuery q;
            q.r1 = parse_elem(r1s);
            q.r2 = parse_elem(r2s);
            q.level = parse_ideal(K, level);
            q.height = height;
            auto r = kuznetsov_geometric_side(K, q, TestFunction::kZ(Z));
            result = {{"value", cj(r.value)}, {"diagonal", r.diagonal}, {"offdiagonal", cj(r.offdiagonal)}};
            cert = {{"majorant", r.majorant}, {"height", height}, {"unit_classes", r.unit_classes},
                    {"moduli", r.moduli}, {"terms", r.terms}};
        } else if (leaf == sh_sum || leaf == sh_dir) {
            auto s1 = make_system(K, system, C.seed);
            auto s2 = make_system(K, system2.empty() ? system : system2, system2.empty() ? C.seed : seed2);
            Ideal y = parse_ideal(K, ystr);
            if (leaf == sh_sum) {
                ShiftedQuery Q{&s1, &s2, parse_elem(l1s), parse_elem(l2s), y, parse_elem(qs), parse_reals(Ys, d, "--Y"), {}, {}};
                Q.W1 = Q.W2 = Weight::product(Profile::bump(lo, hi), std::vector<double>(d, 1.0));
                auto r = shifted_sum(Q);
                result = {{"value", cj(r.value)}};
                cert = {{"candidates", r.candidates}, {"solutions", r.solutions}};
            } else {
                DirichletQuery Q{&s1, &s2, parse_elem(l1s), parse_elem(l2s), y, parse_elem(qs)};
                std::vector<cplx> s;
                for (auto& t : split(ss, ',')) s.push_back(parse_complex(t));
                if (s.size() == 1) s.assign(d, s[0]);
                auto r = dirichlet_D(Q, s, beta, Yreal,
                                     leaf->count("--tol") ? C.tol : std::numeric_limits<double>::infinity());
                result = {{"value", cj(r.value)}, {"leading_term", cj(r.leading_term)}, {"beta_warning", r.beta_warning}};
                cert = {{"height", r.height}, {"tail_bound", r.tail_bound}, {"terms", r.terms}};
            }
        } else if (leaf == sh_amp) {
            auto sys = make_system(K, system, C.seed);
            Ideal q = parse_ideal(K, modulus);
            if (chi_spec.modulus == "1") chi_spec.modulus = modulus;
            auto chi = make_character(K, chi_spec);
            auto r = amplified_moment(K, q, L, sys, chi, Profile::bump(0.5, 2), Yreal);
            json ls = json::array();
            for (auto& l : r.primes) ls.push_back({{"generator", elem_json(K, l.generator)}, {"norm", l.norm}});
            result = {{"side_A", r.side_A},
                      {"side_B", r.side_B},
                      {"extended", r.extended},
                      {"diagonal", cj(r.diagonal)},
                      {"offdiagonal", cj(r.offdiagonal)},
                      {"offdiagonal_shifted", cj(r.offdiagonal_shifted)},
                      {"amplifier", ls}};
            cert = {{"relative_gap", r.relative_gap}, {"phi", r.phi}, {"support", r.support},
                    {"diagonal_pairs", r.diagonal_pairs}, {"offdiagonal_shifts", r.offdiagonal_shifts}};
        } else if (leaf == sh_afe) {
            auto sys = make_system(K, system, C.seed);
            auto chi = make_character(K, chi_spec);
            result = {{"value", cj(afe_sum(sys, chi, Yreal, Profile::bump(0.5, 2)))}};
            cert = {{"exact_finite_sum", true}};
        } else {
            throw std::invalid_argument("incomplete command");
        }
    } catch (const std::exception& e) {
        json err{{"schema", 1}, {"command", command}, {"inputs", inputs}, {"error", e.what()}};
        std::cout << err.dump(2) << "\n";
        return kExitDomain;
    }
    double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    if (!csv.empty() && C.format == "csv") {
        std::cout << csv;
        return 0;
    }
    json out{{"schema", 1}, {"command", command}, {"inputs", inputs}, {"result", result}, {"certificates", cert},
             {"elapsed_ms", C.deterministic ? 0.0 : ms}};
    std::cout << out.dump(2) << "\n";
    return 0;
}
