#include "modlift/cli.hpp"

#include "modlift/lift.hpp"
#include "modlift/modfun.hpp"
#include "modlift/traces.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <thread>

namespace modlift::cli {

using cplx = std::complex<double>;
using nlohmann::json;

void RunConfig::validate() const {
    if (!(tol >= 1e-12 && tol <= 1e-2)) throw std::invalid_argument("--tol must lie in [1e-12, 1e-2]");
    if (trunc < 4 || trunc > 512) throw std::invalid_argument("--trunc must lie in [4, 512]");
    if (threads < 1) throw std::invalid_argument("--threads must be >= 1");
    if (format != "text" && format != "json" && format != "csv") throw std::invalid_argument("--format must be text, json or csv");
}

cplx parse_complex(const std::string& s0) {
    std::string s;
    for (char c : s0)
        if (c != ' ') s += c;
    auto bad = [&] { return std::invalid_argument("cannot parse complex number '" + s0 + "'"); };
    if (s.empty()) throw bad();
    auto number = [&](const std::string& t, bool imag_part) -> double {
        if (imag_part && (t.empty() || t == "+")) return 1.0;
        if (imag_part && t == "-") return -1.0;
        std::size_t pos = 0;
        double v;
        try {
            v = std::stod(t, &pos);
        } catch (...) {
            throw bad();
        }
        if (pos != t.size()) throw bad();
        return v;
    };
    if (s.back() != 'i') return {number(s, false), 0.0};
    std::string body = s.substr(0, s.size() - 1);
    // split at the last sign that is not part of an exponent
    std::size_t split = std::string::npos;
    for (std::size_t k = body.size(); k-- > 1;) {
        if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
            split = k;
            break;
        }
    }
    if (split == std::string::npos) return {0.0, number(body, true)};
    return {number(body.substr(0, split), false), number(body.substr(split), true)};
}

std::string format_complex(cplx z) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "%.15g%+.15gi", z.real(), z.imag());
    return buf;
}

namespace {

std::string fmt(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.15g", v);
    return buf;
}

int parse_F(const std::string& F) {
    if (F == "one" || F == "1") return 0;
    if (F == "J") return 1;
    if (F.size() > 1 && F[0] == 'J') {
        std::size_t pos = 0;
        int m = std::stoi(F.substr(1), &pos);
        if (pos + 1 != F.size() || m < 1) throw std::invalid_argument("bad --F value " + F);
        return m;
    }
    throw std::invalid_argument("--F must be J, J<m> or one, got " + F);
}

struct Context {
    RunConfig cfg;
    traces::TraceTable table;
    explicit Context(const RunConfig& c) : cfg(c), table(c.tol) {}
    void load() {
        if (!cfg.cache_path.empty()) table.load(cfg.cache_path);
    }
    void save() {
        if (!cfg.cache_path.empty()) table.save(cfg.cache_path);
    }
};

json check_json(const lift::Check& c, json extra) {
    extra["check"] = c.name;
    extra["residual"] = c.residual;
    extra["tol"] = c.tol;
    extra["ok"] = c.ok();
    return extra;
}

}  // namespace

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Traces of modular functions, twisted lifts and Borcherds products"};
    app.require_subcommand(1);
    app.fallthrough();  // global options may follow the subcommand
    app.set_version_flag("--version", std::string("modlift ") + kVersion + " (trace cache schema " +
                                          std::to_string(traces::kSchemaVersion) + ")");
    RunConfig cfg;
    if (const char* env = std::getenv(kCacheEnv)) cfg.cache_path = env;
    app.add_option("--cache", cfg.cache_path, "trace cache JSON file (overrides $MODLIFT_CACHE)");
    app.add_option("--threads", cfg.threads, "worker threads");
    app.add_option("--tol", cfg.tol, "tolerance in [1e-12, 1e-2]");
    app.add_option("--format", cfg.format, "text, json or csv");

    // forms
    auto* forms = app.add_subcommand("forms", "list binary quadratic forms");
    arith::Int forms_disc = 0;
    std::string forms_set = "classes", forms_z;
    forms->add_option("--disc", forms_disc, "discriminant")->required();
    forms->add_option("--set", forms_set, "classes, speriod or containing");
    forms->add_option("--z", forms_z, "point for --set containing");

    // trace
    auto* trace = app.add_subcommand("trace", "traces of J_m over CM points or closed geodesics");
    std::string trace_kind = "cycle", trace_F = "J", trace_csv;
    std::vector<arith::Int> trace_discs;
    trace->add_option("--kind", trace_kind, "cm or cycle");
    trace->add_option("--F", trace_F, "J, J<m> or one");
    trace->add_option("--disc", trace_discs, "discriminant(s)")->required();
    trace->add_option("--export-csv", trace_csv, "write the whole trace table as CSV");

    // faber
    auto* fab = app.add_subcommand("faber", "Fourier coefficients of J_m");
    int fab_m = 1, fab_order = 10;
    fab->add_option("--m", fab_m, "index m >= 0");
    fab->add_option("--order", fab_order, "last exponent");

    // lift-type evaluations
    struct EvalArgs {
        arith::Int delta = 5;
        std::string z;
        std::vector<double> grid;
        std::string out;
    };
    EvalArgs ev;
    auto add_eval = [&](const char* name, const char* help) {
        auto* sc = app.add_subcommand(name, help);
        sc->add_option("--delta", ev.delta, "fundamental discriminant > 1");
        sc->add_option("--z", ev.z, "point a+bi in the upper half plane");
        sc->add_option("--trunc", cfg.trunc, "maximal Fourier index, [4, 512]");
        sc->add_option("--grid", ev.grid, "xmin xmax ymin ymax nx ny")->expected(6);
        sc->add_option("--out", ev.out, "CSV output for --grid");
        return sc;
    };
    auto* lift_c = add_eval("lift", "the twisted lift Phi_Delta(h, z)");
    auto* deriv_c = add_eval("deriv", "d/dz of the lift");
    auto* integral_c = add_eval("integral", "the modular integral F_Delta(z)");
    auto* product_c = add_eval("product", "the Borcherds product Psi_Delta(z)");

    // verify
    auto* verify = app.add_subcommand("verify", "numerical identity checks");
    std::string suite = "all";
    std::vector<arith::Int> verify_deltas;
    verify->add_option("--suite", suite, "period, product, jump, continuity, traceid or all");
    verify->add_option("--delta", verify_deltas, "fundamental discriminants (default 5 8 12)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        app.exit(e, out, err);
        return kOk;
    } catch (const CLI::CallForVersion& e) {
        out << e.what() << '\n';
        return kOk;
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kError;
    }

    try {
        cfg.validate();
        Context ctx(cfg);

        if (*forms) {
            std::vector<qforms::QuadForm> list;
            if (forms_set == "classes") list = qforms::class_representatives(forms_disc);
            else if (forms_set == "speriod") list = qforms::forms_S_period(forms_disc);
            else if (forms_set == "containing") list = qforms::forms_containing(forms_disc, parse_complex(forms_z));
            else throw std::invalid_argument("--set must be classes, speriod or containing");
            for (const auto& f : list)
                out << json{{"a", f.a}, {"b", f.b}, {"c", f.c}, {"disc", f.disc()}}.dump() << '\n';
            return kOk;
        }

        if (*trace) {
            ctx.load();
            int m = parse_F(trace_F);
            traces::Kind kind = traces::parse_kind(trace_kind);
            for (auto d : trace_discs) {
                if (kind == traces::Kind::CM && d >= 0) throw std::invalid_argument("--kind cm needs a negative discriminant");
                if (kind == traces::Kind::Cycle && d <= 0) throw std::invalid_argument("--kind cycle needs a positive discriminant");
                arith::Discriminant checked(d);
            }
            std::vector<traces::Key> keys;
            for (auto d : trace_discs) keys.push_back({kind, m, d});
            ctx.table.prefetch(keys, cfg.threads);
            if (cfg.format == "csv") out << "kind,F,disc,value,abs_err\n";
            for (const auto& k : keys) {
                auto e = ctx.table.get(k);
                if (cfg.format == "text") out << fmt(e.value) << " abs_err " << e.abs_err << '\n';
                else if (cfg.format == "csv")
                    out << trace_kind << ',' << trace_F << ',' << k.disc << ',' << traces::format_double(e.value) << ','
                        << traces::format_double(e.abs_err) << '\n';
                else
                    out << json{{"kind", trace_kind}, {"F", trace_F}, {"m", m}, {"disc", k.disc},
                                {"value", traces::format_double(e.value)}, {"abs_err", traces::format_double(e.abs_err)},
                                {"provenance", e.provenance}}
                               .dump()
                        << '\n';
            }
            if (!trace_csv.empty()) ctx.table.export_csv(trace_csv);
            ctx.save();
            return kOk;
        }

        if (*fab) {
            if (fab_m < 0 || fab_order < 1 || fab_order > 4096) throw std::invalid_argument("--m must be >= 0 and --order in [1, 4096]");
            auto s = modfun::faber(fab_m, fab_order);
            // exact integers, so the JSON is written by hand
            std::ostringstream os;
            os << "{\"m\":" << fab_m << ",\"coeffs\":{";
            bool first = true;
            for (int n = -fab_m; n <= fab_order; ++n) {
                const auto& c = s->exact_coeff(n);
                if (c == 0) continue;
                os << (first ? "" : ",") << '"' << n << "\":" << c.str();
                first = false;
            }
            os << "}}";
            out << os.str() << '\n';
            return kOk;
        }

        auto* evsc = *lift_c ? lift_c : *deriv_c ? deriv_c : *integral_c ? integral_c : *product_c ? product_c : nullptr;
        if (evsc) {
            lift::require_lift_delta(ev.delta);
            ctx.load();
            lift::Options opt{std::max(cfg.tol, 1e-12), cfg.trunc};
            auto h = lift::HarmonicCoefficients::h(ctx.table);
            const std::string name = evsc->get_name();
            struct Point {
                cplx value;
                bool singular;
            };
            auto eval = [&](cplx z) -> Point {
                if (name == "lift") {
                    auto v = lift::eval_phi(h, ev.delta, z, opt);
                    return {v.value, v.singular_forms > 0};
                }
                if (name == "deriv") {
                    auto v = lift::eval_phi_prime(h, ev.delta, z, opt);
                    return {v.value, v.singular_forms > 0};
                }
                if (name == "integral") return {lift::eval_F(ctx.table, ev.delta, z, opt).value, false};
                return {lift::eval_product(ctx.table, ev.delta, z, opt).value, false};
            };
            if (!ev.grid.empty()) {
                if (ev.out.empty()) throw std::invalid_argument("--grid needs --out");
                double x0 = ev.grid[0], x1 = ev.grid[1], y0 = ev.grid[2], y1 = ev.grid[3];
                int nx = static_cast<int>(ev.grid[4]), ny = static_cast<int>(ev.grid[5]);
                if (nx < 1 || ny < 1 || nx * double(ny) > 1e7) throw std::invalid_argument("bad grid size");
                if (!(y0 > 0 && y1 > 0)) throw std::invalid_argument("grid must lie in the upper half plane");
                auto coord = [](double a, double b, int n, int k) { return n == 1 ? a : a + (b - a) * k / (n - 1); };
                std::vector<Point> vals(std::size_t(nx) * ny);
                std::atomic<std::size_t> next{0};
                std::exception_ptr failure;
                std::mutex fail_mu;
                auto work = [&] {
                    for (std::size_t i; (i = next++) < vals.size();) {
                        try {
                            int iy = int(i / nx), ix = int(i % nx);
                            vals[i] = eval({coord(x0, x1, nx, ix), coord(y0, y1, ny, iy)});
                        } catch (...) {
                            std::lock_guard<std::mutex> lock(fail_mu);
                            if (!failure) failure = std::current_exception();
                        }
                    }
                };
                std::vector<std::thread> pool;
                for (int t = 1; t < cfg.threads; ++t) pool.emplace_back(work);
                work();
                for (auto& t : pool) t.join();
                if (failure) std::rethrow_exception(failure);
                std::ofstream os(ev.out);
                if (!os) throw std::runtime_error("cannot write " + ev.out);
                os << "x,y,re,im,singular_flag\n";
                for (std::size_t i = 0; i < vals.size(); ++i) {
                    int iy = int(i / nx), ix = int(i % nx);
                    os << fmt(coord(x0, x1, nx, ix)) << ',' << fmt(coord(y0, y1, ny, iy)) << ',' << fmt(vals[i].value.real())
                       << ',' << fmt(vals[i].value.imag()) << ',' << (vals[i].singular ? 1 : 0) << '\n';
                }
                ctx.save();
                return kOk;
            }
            if (ev.z.empty()) throw std::invalid_argument("--z or --grid is required");
            cplx z = parse_complex(ev.z);
            Point p = eval(z);
            if (cfg.format == "json")
                out << json{{"command", name}, {"delta", ev.delta}, {"z", {z.real(), z.imag()}},
                            {"re", p.value.real()}, {"im", p.value.imag()}, {"singular_flag", p.singular ? 1 : 0}}
                           .dump()
                    << '\n';
            else if (cfg.format == "csv")
                out << "x,y,re,im,singular_flag\n"
                    << fmt(z.real()) << ',' << fmt(z.imag()) << ',' << fmt(p.value.real()) << ',' << fmt(p.value.imag())
                    << ',' << (p.singular ? 1 : 0) << '\n';
            else
                out << format_complex(p.value) << '\n';
            ctx.save();
            return kOk;
        }

        if (*verify) {
            ctx.load();
            if (verify_deltas.empty()) verify_deltas = {5, 8, 12};
            for (auto d : verify_deltas) lift::require_lift_delta(d);
            static const std::vector<std::string> known{"period", "product", "jump", "continuity", "traceid", "all"};
            if (std::find(known.begin(), known.end(), suite) == known.end()) throw std::invalid_argument("unknown suite " + suite);
            auto want = [&](const char* s) { return suite == "all" || suite == s; };
            bool all_ok = true;
            auto emit = [&](const lift::Check& c, json extra) {
                all_ok = all_ok && c.ok();
                out << check_json(c, std::move(extra)).dump() << '\n';
            };
            auto h = lift::HarmonicCoefficients::h(ctx.table);
            for (auto d : verify_deltas) {
                if (want("period"))
                    for (cplx z : {cplx(0.5, 1.5), cplx(0, 1), cplx(0.25, 2)})
                        emit(lift::verify_period_relation(ctx.table, d, z), {{"delta", d}, {"z", format_complex(z)}});
                if (want("product"))
                    for (cplx z : {cplx(0, 2), cplx(0.5, 2)}) {
                        emit(lift::verify_product_T(ctx.table, d, z), {{"delta", d}, {"z", format_complex(z)}});
                        emit(lift::verify_log_derivative(ctx.table, d, z), {{"delta", d}, {"z", format_complex(z)}});
                        emit(lift::verify_product_S(ctx.table, d, z), {{"delta", d}, {"z", format_complex(z)}});
                    }
                if (want("jump") || want("continuity")) {
                    // apex of the first class representative; outward normal +i
                    auto q = qforms::class_representatives(d).front();
                    auto g = qforms::geodesic_data(q);
                    cplx z0(g.center(), g.radius());
                    if (want("jump")) {
                        const double eps = 1e-6;
                        cplx jump = lift::eval_phi_prime(h, d, z0 + cplx(0, eps)).value -
                                    lift::eval_phi_prime(h, d, z0 - cplx(0, eps)).value;
                        cplx predicted = cplx(0, -2 * std::sqrt(double(d)) * h.c_minus.at(1) * qforms::genus_character(d, q)) / q.at(z0);
                        emit({"jump", std::abs(jump - predicted) / std::abs(predicted), 1e-3},
                             {{"delta", d}, {"z", format_complex(z0)}});
                    }
                    if (want("continuity")) {
                        // one-sided limits by linear extrapolation from distances eps and 2 eps
                        const double eps = 1e-4;
                        auto side = [&](double sgn) {
                            double a = lift::eval_phi(h, d, z0 + cplx(0, sgn * eps)).value.real();
                            double b = lift::eval_phi(h, d, z0 + cplx(0, 2 * sgn * eps)).value.real();
                            return 2 * a - b;
                        };
                        double upper = side(1), lower = side(-1);
                        emit({"continuity", std::abs(upper - lower), 1e-4},
                             {{"delta", d}, {"z", format_complex(z0)}, {"upper", upper}, {"lower", lower}});
                    }
                }
                if (want("traceid"))
                    for (int m : {2, 3}) {
                        double lhs = ctx.table.get(traces::Kind::Cycle, m, d).value;
                        double rhs = traces::twisted_coefficient(ctx.table, d, m);
                        emit({"traceid", std::abs(lhs - rhs) / std::abs(rhs), 1e-5}, {{"delta", d}, {"m", m}});
                    }
            }
            ctx.save();
            return all_ok ? kOk : kVerifyFailed;
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kError;
    }
    return kError;
}

}  // namespace modlift::cli
