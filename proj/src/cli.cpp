#include "keller/cli.hpp"

#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "keller/atlas.hpp"
#include "keller/clifford.hpp"
#include "keller/io.hpp"
#include "keller/lab.hpp"
#include "keller/matrix.hpp"
#include "keller/norms.hpp"
#include "keller/regions.hpp"
#include "keller/rigidity.hpp"

namespace keller {

namespace {

constexpr std::uint64_t kDefaultSeed = 20240917;

class UsageError : public Error {
public:
    using Error::Error;
};

Json cjson(cplx z) { return Json::array({z.real(), z.imag()}); }

Json mjson(const ComplexMatrix& m) {
    Json rows = Json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(cjson(m(i, j)));
        rows.push_back(row);
    }
    return rows;
}

ComplexMatrix matrix_from_json(const Json& j) {
    if (!j.is_array() || j.empty() || !j[0].is_array()) throw PreconditionError("matrix: expected a nested array");
    ComplexMatrix m(static_cast<Eigen::Index>(j.size()), static_cast<Eigen::Index>(j[0].size()));
    for (std::size_t r = 0; r < j.size(); ++r) {
        if (j[r].size() != j[0].size()) throw PreconditionError("matrix: ragged rows");
        for (std::size_t c = 0; c < j[r].size(); ++c) {
            const Json& e = j[r][c];
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                e.is_array() ? cplx(e.at(0).get<double>(), e.at(1).get<double>()) : cplx(e.get<double>(), 0.0);
        }
    }
    return m;
}

cplx parse_complex(const std::string& s) {
    const auto comma = s.find(',');
    try {
        if (comma == std::string::npos) return {std::stod(s), 0.0};
        return {std::stod(s.substr(0, comma)), std::stod(s.substr(comma + 1))};
    } catch (const std::logic_error&) {
        throw UsageError("expected a complex number as 're,im', got '" + s + "'");
    }
}

double parse_real(const std::string& s) {
    if (s == "inf" || s == "infinity") return kInf;
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::logic_error&) {
        throw UsageError("expected a number, got '" + s + "'");
    }
}

struct Context {
    std::ostream& out;
    std::ostream& err;
    std::uint64_t seed = kDefaultSeed;
    std::string format;
    std::string output_dir;
    std::string stem;
    Json config;

    ArtifactHeader header() const { return make_header(config, seed); }

    std::string fmt(const std::string& dflt, std::initializer_list<const char*> allowed) const {
        const std::string f = format.empty() ? dflt : format;
        for (const char* a : allowed)
            if (f == a) return f;
        throw UsageError("format '" + f + "' is not available for " + stem);
    }

    void write(const std::string& content, const std::string& ext) const {
        if (output_dir.empty()) {
            out << content;
            return;
        }
        std::filesystem::create_directories(output_dir);
        const auto path = std::filesystem::path(output_dir) / (stem + "." + ext);
        std::ofstream f(path, std::ios::binary);
        if (!f) throw PreconditionError("cannot write '" + path.string() + "'");
        f << content;
        err << "wrote " << path.string() << "\n";
    }

    void json(const Json& body) const {
        std::ostringstream s;
        write_json(s, header(), body);
        write(s.str(), "json");
    }

    void csv(const std::vector<std::string>& cols, const std::vector<std::vector<std::string>>& rows) const {
        std::ostringstream s;
        write_csv(s, header(), cols, rows);
        write(s.str(), "csv");
    }
};

using Handler = std::function<int(Context&)>;

struct Registry {
    std::map<const CLI::App*, Handler> handlers;
};

CLI::App* leaf(CLI::App* group, const std::string& name, const std::string& desc) {
    CLI::App* s = group->add_subcommand(name, desc);
    s->fallthrough();
    s->configurable();
    return s;
}

// ---------------------------------------------------------------------------------------------

void add_clifford(CLI::App& app, Registry& reg) {
    CLI::App* g = app.add_subcommand("clifford", "Dirac matrices: generate and check");
    g->fallthrough();
    g->configurable();
    g->require_subcommand(1);

    {
        auto n = std::make_shared<int>(3);
        auto form = std::make_shared<std::string>("recursive");
        CLI::App* s = leaf(g, "gen", "Emit alpha_1..alpha_{n+1} (and beta_k)");
        s->add_option("--n", *n, "spatial dimension (1..20)")->required();
        s->add_option("--form", *form, "recursive | closed")->check(CLI::IsMember({"recursive", "closed"}));
        reg.handlers[s] = [n, form](Context& c) {
            const DiracRep rep = *form == "closed" ? dirac_matrices_closed_form(*n) : dirac_matrices(*n);
            const std::string f = c.fmt("json", {"json", "csv"});
            if (f == "csv") {
                std::vector<std::vector<std::string>> rows;
                for (std::size_t k = 0; k < rep.alphas.size(); ++k)
                    for (Eigen::Index i = 0; i < rep.N; ++i)
                        for (Eigen::Index j = 0; j < rep.N; ++j) {
                            const cplx v = rep.alphas[k](i, j);
                            if (v != 0.0)
                                rows.push_back({std::to_string(k + 1), std::to_string(i), std::to_string(j),
                                                format_double(v.real()), format_double(v.imag())});
                        }
                c.csv({"k", "row", "col", "re", "im"}, rows);
                return kExitOk;
            }
            Json alphas = Json::array(), betas = Json::array();
            for (const auto& a : rep.alphas) alphas.push_back(mjson(a));
            for (const auto& b : rep.betas) betas.push_back(mjson(b));
            c.json({{"n", rep.n}, {"N", rep.N}, {"form", *form}, {"alphas", alphas}, {"betas", betas}});
            return kExitOk;
        };
    }
    {
        auto n = std::make_shared<int>(3);
        CLI::App* s = leaf(g, "check", "Anticommutation, closed form, alpha-tilde and recursion identities");
        s->add_option("--n", *n, "spatial dimension (1..20)")->required();
        reg.handlers[s] = [n](Context& c) {
            c.fmt("json", {"json"});
            const DiracRep rep = dirac_matrices(*n);
            const CliffordReport r = check_clifford(rep);
            bool ok = r.passed();
            Json rec = Json::array();
            for (int m = 2; m <= *n; ++m) {
                if ((*n - m) % 2) continue;
                const RecursionReport rr = recursion_check(*n, m);
                ok = ok && rr.passed();
                rec.push_back({{"m", m},
                               {"branch_deviation", rr.branch_deviation},
                               {"branch_count", rr.branch_count},
                               {"passed", rr.passed()}});
            }
            c.json({{"n", r.n},
                    {"N", rep.N},
                    {"residuals",
                     {{"hermiticity", r.hermiticity},
                      {"anticommutator", r.anticommutator},
                      {"mass_block", r.mass_block},
                      {"beta_relation", r.beta_relation},
                      {"tilde_closed_form", r.tilde_closed_form},
                      {"tilde_square", r.tilde_square},
                      {"tilde_adjoint", r.tilde_adjoint},
                      {"tilde_commutation", r.tilde_commutation},
                      {"closed_form", r.closed_form}}},
                    {"recursion", rec},
                    {"passed", ok}});
            return ok ? kExitOk : kExitVerification;
        };
    }
}

// ---------------------------------------------------------------------------------------------

Json ra_report_json(const RAReport& r) {
    return {{"residual", r.residual},
            {"mass_product", r.mass_product},
            {"ab_product", r.ab_product},
            {"v_size", r.v_size},
            {"mass_zero", r.mass_zero},
            {"ab_zero", r.ab_zero},
            {"v_nonzero", r.v_nonzero},
            {"inferred", r.inferred ? to_string(*r.inferred) : "none"},
            {"norm_deviation_a", r.norm_deviation_a},
            {"norm_deviation_b", r.norm_deviation_b}};
}

Json potential_json(const RigidPotential& p, const RAReport& r) {
    return {{"class", p.ra_class ? to_string(*p.ra_class) : "none"},
            {"n", p.n},
            {"sign", p.sign},
            {"A", mjson(p.A)},
            {"B", mjson(p.B)},
            {"V", mjson(p.V)},
            {"report", ra_report_json(r)}};
}

void add_rigidity(CLI::App& app, Registry& reg) {
    CLI::App* g = app.add_subcommand("rigidity", "Rigid potentials: examples, verification, non-existence probes");
    g->fallthrough();
    g->configurable();
    g->require_subcommand(1);
    {
        auto cls = std::make_shared<std::string>();
        auto n = std::make_shared<int>(3);
        auto sign = std::make_shared<int>(1);
        CLI::App* s = leaf(g, "examples", "Explicit potentials; all admissible classes when --class is omitted");
        s->add_option("--class", *cls, "i | ii | iii | iv");
        s->add_option("--n", *n, "spatial dimension")->required();
        s->add_option("--sign", *sign, "+1 or -1")->check(CLI::IsMember({1, -1}));
        reg.handlers[s] = [cls, n, sign](Context& c) {
            c.fmt("json", {"json"});
            std::vector<RaClass> classes;
            if (cls->empty()) {
                for (RaClass k : {RaClass::i, RaClass::ii, RaClass::iii, RaClass::iv})
                    if (ra_admissible(k, *n)) classes.push_back(k);
            } else {
                classes.push_back(parse_ra_class(*cls));
            }
            const DiracRep rep = dirac_matrices(*n);
            Json list = Json::array();
            bool ok = true;
            for (RaClass k : classes) {
                const RigidPotential p = example(k, *n, *sign);
                const RAReport r = verify(p.A, p.B, rep);
                ok = ok && r.inferred == k;
                list.push_back(potential_json(p, r));
            }
            c.json({{"n", *n}, {"examples", list}, {"passed", ok}});
            return ok ? kExitOk : kExitVerification;
        };
    }
    {
        auto input = std::make_shared<std::string>();
        auto cls = std::make_shared<std::string>();
        auto n = std::make_shared<int>(3);
        auto sign = std::make_shared<int>(1);
        auto tol = std::make_shared<double>(1e-10);
        CLI::App* s = leaf(g, "verify", "Classify a pair (A, B) read from JSON, or a built-in example");
        s->add_option("--input", *input, "JSON file with \"A\" and \"B\" as nested [re, im] arrays");
        s->add_option("--class", *cls, "expected class (required for built-in examples)");
        s->add_option("--n", *n, "spatial dimension")->required();
        s->add_option("--sign", *sign, "+1 or -1 for built-in examples")->check(CLI::IsMember({1, -1}));
        s->add_option("--tol", *tol, "zero threshold");
        reg.handlers[s] = [=](Context& c) {
            c.fmt("json", {"json"});
            RigidPotential p;
            if (!input->empty()) {
                std::ifstream f(*input);
                if (!f) throw PreconditionError("cannot open '" + *input + "'");
                Json j;
                try {
                    f >> j;
                } catch (const Json::exception& e) {
                    throw PreconditionError(std::string("malformed JSON: ") + e.what());
                }
                p.n = *n;
                p.A = matrix_from_json(j.at("A"));
                p.B = matrix_from_json(j.at("B"));
                p.V = p.B.adjoint() * p.A;
            } else {
                if (cls->empty()) throw UsageError("--class is required without --input");
                p = example(parse_ra_class(*cls), *n, *sign);
            }
            const RAReport r = verify(p.A, p.B, dirac_matrices(*n), *tol);
            bool ok = r.inferred.has_value();
            if (!cls->empty()) ok = r.inferred == parse_ra_class(*cls);
            c.json({{"n", *n}, {"expected", cls->empty() ? "any" : *cls}, {"report", ra_report_json(r)}, {"passed", ok}});
            return ok ? kExitOk : kExitVerification;
        };
    }
    {
        auto cls = std::make_shared<std::string>();
        auto n = std::make_shared<int>(2);
        auto trials = std::make_shared<int>(1000);
        auto serial = std::make_shared<bool>(false);
        CLI::App* s = leaf(g, "probe", "Randomized search for a potential of a class claimed not to exist");
        s->add_option("--class", *cls, "i | ii | iii | iv")->required();
        s->add_option("--n", *n, "spatial dimension")->required();
        s->add_option("--trials", *trials, "number of seeded trials");
        s->add_flag("--serial", *serial, "use the serial reference implementation");
        reg.handlers[s] = [=](Context& c) {
            const std::string f = c.fmt("json", {"json", "csv"});
            const RaClass k = parse_ra_class(*cls);
            const ProbeReport r = *serial ? nonexistence_probe_serial(k, *n, *trials, c.seed)
                                          : nonexistence_probe(k, *n, *trials, c.seed);
            if (f == "csv") {
                std::vector<std::vector<std::string>> rows;
                for (int t = 0; t < r.trials; ++t)
                    rows.push_back({std::to_string(t), std::to_string(r.b_ranks[static_cast<std::size_t>(t)]),
                                    std::to_string(r.nullspace_dims[static_cast<std::size_t>(t)])});
                c.csv({"trial", "b_rank", "nullspace_dim"}, rows);
            } else {
                c.json({{"class", to_string(k)},
                        {"n", r.n},
                        {"trials", r.trials},
                        {"seed", r.seed},
                        {"counterexamples", r.counterexamples},
                        {"nullspace_dims", r.nullspace_dims},
                        {"b_ranks", r.b_ranks},
                        {"passed", r.counterexamples == 0}});
            }
            return r.counterexamples == 0 ? kExitOk : kExitVerification;
        };
    }
}

// ---------------------------------------------------------------------------------------------

RadialProfile radial_profile(const std::string& spec, int n, Interpolation interp) {
    if (spec.rfind("indicator:", 0) == 0) {
        double r0 = 1.0, amp = 1.0;
        std::stringstream ss(spec.substr(10));
        std::string item;
        while (std::getline(ss, item, ',')) {
            const auto eq = item.find('=');
            if (eq == std::string::npos) throw UsageError("profile: expected key=value in '" + spec + "'");
            const std::string k = item.substr(0, eq);
            const double v = parse_real(item.substr(eq + 1));
            if (k == "r0") r0 = v;
            else if (k == "amp") amp = v;
            else throw UsageError("profile: unknown key '" + k + "'");
        }
        RadialProfile p;
        p.n = n;
        p.r = {r0};
        p.value = {amp};
        p.validate();
        return p;
    }
    const std::string path = spec.rfind("file:", 0) == 0 ? spec.substr(5) : spec;
    return load_profile_csv(path, n, interp);
}

void add_norms(CLI::App& app, Registry& reg) {
    CLI::App* g = app.add_subcommand("norms", "Radial Lebesgue, Lorentz and Mizohata-Takeuchi norms");
    g->fallthrough();
    g->configurable();
    g->require_subcommand(1);
    auto profile = std::make_shared<std::string>();
    auto n = std::make_shared<int>(3);
    auto kind = std::make_shared<std::string>("lp");
    auto p = std::make_shared<std::string>("1");
    auto q = std::make_shared<std::string>("1");
    auto interp = std::make_shared<std::string>("constant");
    CLI::App* s = leaf(g, "eval", "Evaluate a norm of a radial profile");
    s->add_option("--profile", *profile, "file:path.csv (r, value) or indicator:r0=R,amp=A")->required();
    s->add_option("--n", *n, "dimension of the radial measure r^{n-1} dr");
    s->add_option("--kind", *kind, "lp | lorentz | mt")->check(CLI::IsMember({"lp", "lorentz", "mt"}));
    s->add_option("--p", *p, "first exponent (inf allowed for lp)");
    s->add_option("--q", *q, "second Lorentz exponent");
    s->add_option("--interp", *interp, "constant | linear")->check(CLI::IsMember({"constant", "linear"}));
    reg.handlers[s] = [=](Context& c) {
        c.fmt("json", {"json"});
        const RadialProfile f = radial_profile(
            *profile, *n, *interp == "linear" ? Interpolation::piecewise_linear : Interpolation::piecewise_constant);
        double v = 0.0;
        if (*kind == "lp") v = lp_radial_norm(f, parse_real(*p));
        else if (*kind == "lorentz") v = lorentz_radial_norm(f, parse_real(*p), parse_real(*q));
        else v = mt_norm(f);
        c.json({{"kind", *kind}, {"n", *n}, {"p", *p}, {"q", *q}, {"pieces", f.r.size()}, {"value", v}});
        return kExitOk;
    };
}

// ---------------------------------------------------------------------------------------------

struct SpecOptions {
    std::string theorem = "t2.1";
    double m = 1.0;
    double norm = 1.0;
    std::string gamma;
    std::string constant;
    int n = 0;
};

void add_spec_options(CLI::App* s, SpecOptions& o) {
    s->add_option("--theorem", o.theorem, "t2.1 t2.2 t2.3 t2.5 t2.6 t2.7 t2.8 t2.9 dfs")->required();
    s->add_option("--m", o.m, "mass m >= 0");
    s->add_option("--norm", o.norm, "norm of the potential entering the theorem");
    s->add_option("--gamma", o.gamma, "exponent gamma (inf allowed where admissible)");
    s->add_option("--constant", o.constant, "D or C0; defaults to the documented value");
    s->add_option("--n", o.n, "dimension; defaults per theorem");
}

EnclosureSpec build_spec(const SpecOptions& o, std::ostream& err) {
    EnclosureSpec s = default_spec(parse_theorem(o.theorem), o.m, o.norm);
    if (o.n > 0) s.n = o.n;
    if (!o.gamma.empty()) s.gamma = parse_real(o.gamma);
    if (!o.constant.empty()) s.constant = parse_real(o.constant);
    validate(s);
    if (constant_is_placeholder(s))
        err << "note: constant " << s.constant << " for " << to_string(s.theorem)
            << " is a placeholder, not a value fixed by the theory\n";
    return s;
}

Json spec_json(const EnclosureSpec& s) {
    return {{"theorem", to_string(s.theorem)}, {"m", s.m},         {"gamma", format_double(s.gamma)},
            {"norm", s.norm_value},            {"constant", s.constant}, {"n", s.n}};
}

void add_regions(CLI::App& app, Registry& reg) {
    CLI::App* g = app.add_subcommand("regions", "Eigenvalue enclosure regions");
    g->fallthrough();
    g->configurable();
    g->require_subcommand(1);
    {
        auto o = std::make_shared<SpecOptions>();
        auto zs = std::make_shared<std::vector<std::string>>();
        CLI::App* s = leaf(g, "member", "Test points against an enclosure");
        add_spec_options(s, *o);
        s->add_option("--z", *zs, "point as re,im (repeatable)")->required();
        reg.handlers[s] = [=](Context& c) {
            const std::string f = c.fmt("json", {"json", "csv"});
            const EnclosureSpec spec = build_spec(*o, c.err);
            Json pts = Json::array();
            std::vector<std::vector<std::string>> rows;
            for (const auto& zs_ : *zs) {
                const cplx z = parse_complex(zs_);
                Json e = {{"z", cjson(z)}};
                std::string lhs = "nan", rhs = "nan", mem = "singular";
                try {
                    const Sides sd = sides(spec, z);
                    const bool in = member(spec, z);
                    e["lhs"] = format_double(sd.lhs);
                    e["rhs"] = format_double(sd.rhs);
                    e["member"] = in;
                    lhs = format_double(sd.lhs);
                    rhs = format_double(sd.rhs);
                    mem = in ? "1" : "0";
                } catch (const SingularPointError& ex) {
                    e["member"] = nullptr;
                    e["singular"] = ex.what();
                }
                pts.push_back(e);
                rows.push_back({format_double(z.real()), format_double(z.imag()), lhs, rhs, mem});
            }
            if (f == "csv") c.csv({"re_z", "im_z", "lhs", "rhs", "member"}, rows);
            else c.json({{"spec", spec_json(spec)}, {"points", pts}});
            return kExitOk;
        };
    }
    {
        auto o = std::make_shared<SpecOptions>();
        auto samples = std::make_shared<int>(512);
        auto window = std::make_shared<std::vector<double>>();
        CLI::App* s = leaf(g, "boundary", "Sample the boundary of an enclosure");
        add_spec_options(s, *o);
        s->add_option("--samples", *samples, "points per component (exact curves) or grid scale (traced)");
        s->add_option("--window", *window, "re_min,re_max,im_min,im_max")->expected(4)->delimiter(',');
        reg.handlers[s] = [=](Context& c) {
            const std::string f = c.fmt("svg", {"svg", "csv", "json"});
            const EnclosureSpec spec = build_spec(*o, c.err);
            std::optional<Window> w;
            if (!window->empty()) w = Window{(*window)[0], (*window)[1], (*window)[2], (*window)[3]};
            const Boundary b = boundary(spec, *samples, w);
            if (!b.diagnostic.empty()) c.err << "note: " << b.diagnostic << "\n";
            if (f == "csv") {
                std::vector<std::vector<std::string>> rows;
                for (std::size_t i = 0; i < b.points.size(); ++i)
                    rows.push_back({std::to_string(b.component[i]), format_double(b.points[i].real()),
                                    format_double(b.points[i].imag())});
                c.csv({"component", "re", "im"}, rows);
            } else if (f == "json") {
                Json comps = Json::array();
                for (int k = 0; k < b.component_count; ++k) {
                    Json pts = Json::array();
                    for (std::size_t i = 0; i < b.points.size(); ++i)
                        if (b.component[i] == k) pts.push_back(cjson(b.points[i]));
                    comps.push_back(pts);
                }
                c.json({{"spec", spec_json(spec)},
                        {"component_count", b.component_count},
                        {"diagnostic", b.diagnostic},
                        {"components", comps}});
            } else {
                Window v = w.value_or(Window{-1, 1, -1, 1});
                if (!w) {
                    double r = std::max(1.0, 1.2 * spec.m);
                    for (const cplx& z : b.points) r = std::max(r, 1.15 * std::abs(z));
                    v = {-r, r, -r, r};
                }
                SvgCanvas cv(v.re_min, v.re_max, v.im_min, v.im_max);
                cv.axes("Re z", "Im z");
                for (int k = 0; k < b.component_count; ++k) {
                    std::vector<Point2> pts;
                    for (std::size_t i = 0; i < b.points.size(); ++i)
                        if (b.component[i] == k) pts.emplace_back(b.points[i].real(), b.points[i].imag());
                    const bool closed = pts.size() > 2 && std::abs(cplx(pts.front().first, pts.front().second) -
                                                                   cplx(pts.back().first, pts.back().second)) <
                                                              0.05 * (v.re_max - v.re_min);
                    cv.polyline(pts, "#1f5fbf", closed, 1.6);
                }
                if (spec.m > 0) {
                    cv.marker(spec.m, 0, 3, "#c8312b");
                    cv.marker(-spec.m, 0, 3, "#c8312b");
                }
                cv.text(v.re_min, v.im_max + 0.06 * (v.im_max - v.im_min),
                        to_string(spec.theorem) + "  m=" + format_double(spec.m).substr(0, 8) +
                            "  norm=" + format_double(spec.norm_value).substr(0, 8),
                        12);
                c.write(cv.render(c.header()), "svg");
            }
            return kExitOk;
        };
    }
    {
        auto o = std::make_shared<SpecOptions>();
        CLI::App* s = leaf(g, "disks", "Centers and radius of the disk enclosures (t2.7, t2.9, dfs)");
        add_spec_options(s, *o);
        reg.handlers[s] = [=](Context& c) {
            c.fmt("json", {"json"});
            const EnclosureSpec spec = build_spec(*o, c.err);
            const Disks d = disks(spec);
            c.json({{"spec", spec_json(spec)},
                    {"c_plus", cjson(d.c_plus)},
                    {"c_minus", cjson(d.c_minus)},
                    {"radius", d.radius},
                    {"ratio", format_double(d.ratio)}});
            return kExitOk;
        };
    }
}

// ---------------------------------------------------------------------------------------------

Json classification_json(const ClassificationReport& r) {
    return {{"n", r.point.n},
            {"x", to_string(r.point.x)},
            {"y", to_string(r.point.y)},
            {"in_square", r.in_square},
            {"uniform_region", r.uniform},
            {"radial_triangle", r.radial_triangle},
            {"stripe", r.stripe},
            {"removed_set", r.removed},
            {"upper_bound_gap", r.upper_bound_gap},
            {"endpoints_hit", r.endpoints_hit},
            {"estimates", r.lemmas},
            {"z_power", to_string(r.z_power)},
            {"gamma", to_string(r.gamma)},
            {"notes", r.notes}};
}

void add_atlas(CLI::App& app, Registry& reg) {
    CLI::App* g = app.add_subcommand("atlas", "Exponent regions of the Laplace resolvent estimates");
    g->fallthrough();
    g->configurable();
    g->require_subcommand(1);
    {
        auto n = std::make_shared<int>(3);
        auto p = std::make_shared<std::string>();
        auto q = std::make_shared<std::string>();
        auto x = std::make_shared<std::string>();
        auto y = std::make_shared<std::string>();
        CLI::App* s = leaf(g, "classify", "Classify (1/p, 1/q) exactly");
        s->add_option("--n", *n, "dimension >= 2")->required();
        s->add_option("--p", *p, "exponent p as a/b, integer or inf");
        s->add_option("--q", *q, "exponent q as a/b, integer or inf");
        s->add_option("--x", *x, "1/p directly (exclusive with --p)")->excludes("--p");
        s->add_option("--y", *y, "1/q directly (exclusive with --q)")->excludes("--q");
        reg.handlers[s] = [=](Context& c) {
            c.fmt("json", {"json"});
            if ((p->empty() && x->empty()) || (q->empty() && y->empty()))
                throw UsageError("need --p or --x, and --q or --y");
            ExponentPoint pt;
            pt.n = *n;
            pt.x = x->empty() ? reciprocal_exponent(*p) : parse_rational(*x);
            pt.y = y->empty() ? reciprocal_exponent(*q) : parse_rational(*y);
            c.json(classification_json(classify(pt)));
            return kExitOk;
        };
    }
    {
        auto n = std::make_shared<int>(3);
        CLI::App* s = leaf(g, "svg", "Region diagram with labeled endpoints");
        s->add_option("--n", *n, "dimension >= 2")->required();
        reg.handlers[s] = [=](Context& c) {
            const std::string f = c.fmt("svg", {"svg", "json"});
            if (f == "json") {
                Json e = Json::object();
                for (const auto& [k, v] : endpoints(*n)) e[k] = {to_string(v.x), to_string(v.y)};
                c.json({{"n", *n}, {"endpoints", e}});
            } else {
                c.write(atlas_svg(*n, c.header()), "svg");
            }
            return kExitOk;
        };
    }
}

// ---------------------------------------------------------------------------------------------

struct LabOptions {
    std::string cls = "ii";
    int dim = 1;
    int sign = 1;
    double m = 1.0;
    std::string v = "gaussian:amp=1,width=1";
    int M = 512;
    double L = 40.0;
};

void add_lab_options(CLI::App* s, LabOptions& o) {
    s->add_option("--class", o.cls, "rigidity class of the potential matrix");
    s->add_option("--dim", o.dim, "dimension n of the Dirac fiber (the grid stays one-dimensional)");
    s->add_option("--sign", o.sign, "+1 or -1 branch of the example")->check(CLI::IsMember({1, -1}));
    s->add_option("--m", o.m, "mass");
    s->add_option("--v", o.v,
                  "scalar profile: gaussian:amp=A,width=W | step:r0=R,amp=A | delta:amp=A | file:path.csv "
                  "(gaussian amp is the L1 mass)");
    s->add_option("--M", o.M, "grid points (power of two >= 16)");
    s->add_option("--L", o.L, "period length");
}

void add_lab(CLI::App& app, Registry& reg) {
    CLI::App* g = app.add_subcommand("lab", "One-dimensional lattice experiments with n-dimensional fibers");
    g->fallthrough();
    g->configurable();
    g->require_subcommand(1);
    {
        auto zs = std::make_shared<std::vector<std::string>>();
        auto xs = std::make_shared<int>(201);
        CLI::App* s = leaf(g, "kernel-check", "Explicit 1D Laplace resolvent kernel against |z|^{-1/2}/2");
        s->add_option("--z", *zs, "re,im (repeatable)")->required();
        s->add_option("--xs", *xs, "samples per axis on [-5, 5]");
        reg.handlers[s] = [=](Context& c) {
            c.fmt("json", {"json"});
            Json list = Json::array();
            bool ok = true;
            for (const auto& zz : *zs) {
                const KernelCheck k = schrodinger_kernel_bound_check(parse_complex(zz), *xs);
                const bool pass = k.ratio <= 1.0 + 1e-12 && std::abs(k.diagonal_ratio - 1.0) <= 1e-12;
                ok = ok && pass;
                list.push_back({{"z", cjson(k.z)},
                                {"bound", k.bound},
                                {"sup", k.sup},
                                {"ratio", k.ratio},
                                {"diagonal_ratio", k.diagonal_ratio},
                                {"passed", pass}});
            }
            c.json({{"checks", list}, {"passed", ok}});
            return ok ? kExitOk : kExitVerification;
        };
    }
    {
        auto o = std::make_shared<LabOptions>();
        auto rect = std::make_shared<std::vector<double>>(std::vector<double>{-3, 3, 0.5, 6});
        auto res = std::make_shared<std::vector<int>>(std::vector<int>{13, 12});
        auto zs = std::make_shared<std::vector<std::string>>();
        auto serial = std::make_shared<bool>(false);
        CLI::App* s = leaf(g, "bs-sweep", "Birman-Schwinger operator norm over a grid of z");
        add_lab_options(s, *o);
        s->add_option("--rect", *rect, "re_min,re_max,im_min,im_max")->expected(4)->delimiter(',');
        s->add_option("--res", *res, "nre,nim")->expected(2)->delimiter(',');
        s->add_option("--z", *zs, "explicit points re,im (repeatable; replaces --rect)");
        s->add_flag("--serial", *serial, "use the serial reference implementation");
        reg.handlers[s] = [=](Context& c) {
            const std::string f = c.fmt("csv", {"csv", "json"});
            const GridModel grid{o->L, o->M};
            grid.validate();
            const RigidPotential pot = example(parse_ra_class(o->cls), o->dim, o->sign);
            const ScalarProfile v = parse_profile(o->v, grid);
            std::vector<cplx> pts;
            if (!zs->empty())
                for (const auto& z : *zs) pts.push_back(parse_complex(z));
            else
                pts = z_rectangle((*rect)[0], (*rect)[1], (*rect)[2], (*rect)[3], (*res)[0], (*res)[1]);
            const auto sweep = *serial ? bs_norm_sweep_serial(grid, pot, v, o->m, pts)
                                       : bs_norm_sweep(grid, pot, v, o->m, pts);
            int failed = 0;
            for (const auto& p : sweep) failed += !p.ok;
            if (failed) c.err << "note: " << failed << " sweep points failed (marked nan)\n";
            if (f == "csv") {
                std::vector<std::vector<std::string>> rows;
                for (const auto& p : sweep)
                    rows.push_back({format_double(p.z.real()), format_double(p.z.imag()), format_double(p.bs_norm),
                                    format_double(p.kappa_bound)});
                c.csv({"re_z", "im_z", "bs_norm", "kappa_bound"}, rows);
            } else {
                Json list = Json::array();
                for (const auto& p : sweep)
                    list.push_back({{"z", cjson(p.z)},
                                    {"bs_norm", format_double(p.bs_norm)},
                                    {"kappa_bound", format_double(p.kappa_bound)},
                                    {"ok", p.ok},
                                    {"error", p.error}});
                c.json({{"v_l1", v.l1_norm}, {"points", list}});
            }
            return kExitOk;
        };
    }
    {
        auto o = std::make_shared<LabOptions>();
        auto so = std::make_shared<SpecOptions>();
        auto tol_ess = std::make_shared<double>(-1.0);
        auto tol_im = std::make_shared<double>(1e-6);
        auto tail = std::make_shared<double>(0.25);
        CLI::App* s = leaf(g, "eigen", "Perturbed spectrum, artifact filter and enclosure check");
        add_lab_options(s, *o);
        s->add_option("--theorem", so->theorem, "enclosure to check against");
        s->add_option("--gamma", so->gamma, "exponent gamma of the enclosure");
        s->add_option("--constant", so->constant, "D or C0 of the enclosure");
        s->add_option("--tol-ess", *tol_ess, "distance to the free spectrum for the artifact filter (default 5*2pi/L)");
        s->add_option("--tol-im", *tol_im, "imaginary-part threshold for the artifact filter");
        s->add_option("--tail-fraction", *tail, "eigenvector mass in |x| > L/4 above which it is delocalized");
        reg.handlers[s] = [=](Context& c) {
            c.fmt("json", {"json"});
            const GridModel grid{o->L, o->M};
            grid.validate();
            const RigidPotential pot = example(parse_ra_class(o->cls), o->dim, o->sign);
            const ScalarProfile v = parse_profile(o->v, grid);
            SpecOptions sp = *so;
            sp.m = o->m;
            sp.norm = v.l1_norm;
            sp.n = 1;
            const EnclosureSpec spec = build_spec(sp, c.err);
            SpectrumOptions opt;
            if (*tol_ess >= 0) opt.tol_ess = *tol_ess;
            opt.tol_im = *tol_im;
            opt.tail_fraction = *tail;
            const EnclosureCheckReport r = perturbed_spectrum(grid, pot, v, o->m, spec, opt);
            Json list = Json::array();
            for (const auto& e : r.eigenvalues) {
                Json j = {{"z", cjson(e.z)},
                          {"tag", to_string(e.tag)},
                          {"free_distance", e.free_distance},
                          {"tail_mass", e.tail_mass}};
                if (e.tag == FilterTag::kept) {
                    j["margin"] = format_double(e.margin);
                    j["violates"] = e.violates;
                }
                list.push_back(j);
            }
            c.json({{"spec", spec_json(r.spec)},
                    {"v_l1", v.l1_norm},
                    {"tol_ess", r.tol_ess},
                    {"tol_im", r.tol_im},
                    {"tail_fraction", r.tail_fraction},
                    {"kept", r.kept},
                    {"violations", r.violations},
                    {"eigenvalues", list}});
            return r.violations == 0 ? kExitOk : kExitVerification;
        };
    }
}

// ---------------------------------------------------------------------------------------------

Json effective_config(const CLI::App* leaf_app, const std::vector<const CLI::App*>& chain) {
    Json cfg = Json::object();
    std::string command;
    for (const CLI::App* a : chain) {
        if (a->get_parent()) command += (command.empty() ? "" : " ") + a->get_name();
        for (const CLI::Option* opt : a->get_options()) {
            const std::string name = opt->get_single_name();
            if (name.empty() || name == "help" || name == "config") continue;
            if (opt->count() > 0) {
                const auto& res = opt->results();
                cfg[name] = res.size() == 1 ? Json(res.front()) : Json(res);
            } else if (!opt->get_default_str().empty()) {
                cfg[name] = opt->get_default_str();
            }
        }
    }
    (void)leaf_app;
    Json out = {{"command", command}};
    for (auto it = cfg.begin(); it != cfg.end(); ++it) out[it.key()] = it.value();
    return out;
}

} // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"keller: Dirac eigenvalue enclosures, rigid potentials and numerical checks", "keller"};
    app.set_version_flag("--version", std::string(KELLER_VERSION));
    app.require_subcommand(1);
    Context ctx{out, err};
    app.set_config("--config", "", "INI/TOML file; keys 'group.action.option' or sections [group.action]");
    app.add_option("--seed", ctx.seed, "64-bit seed for all randomness")->capture_default_str();
    app.add_option("--out", ctx.format, "artifact format: csv | json | svg (default depends on the command)")
        ->check(CLI::IsMember({"csv", "json", "svg"}));
    app.add_option("--output-dir", ctx.output_dir, "write the artifact to this directory instead of stdout");

    Registry reg;
    add_clifford(app, reg);
    add_rigidity(app, reg);
    add_norms(app, reg);
    add_regions(app, reg);
    add_atlas(app, reg);
    add_lab(app, reg);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    std::vector<const CLI::App*> chain{&app};
    const CLI::App* cur = &app;
    while (!cur->get_subcommands().empty()) {
        cur = cur->get_subcommands().front();
        chain.push_back(cur);
    }
    const auto it = reg.handlers.find(cur);
    if (it == reg.handlers.end()) {
        err << "usage error: incomplete command\n" << app.help();
        return kExitUsage;
    }
    ctx.stem = chain.size() >= 3 ? chain[1]->get_name() + "_" + chain[2]->get_name() : cur->get_name();
    ctx.config = effective_config(cur, chain);
    try {
        return it->second(ctx);
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const PreconditionError& e) {
        err << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const SingularPointError& e) {
        err << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kExitVerification;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitVerification;
    }
}

} // namespace keller
