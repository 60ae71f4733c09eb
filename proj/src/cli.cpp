#include "opquot/cli.hpp"

#include <array>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <optional>

#include <CLI11.hpp>
#include <json.hpp>

#include "opquot/algebra.hpp"
#include "opquot/io.hpp"
#include "opquot/oracle.hpp"
#include "opquot/report.hpp"

namespace opquot::cli {

namespace {

using nlohmann::json;

struct GlobalOptions {
    std::optional<double> tol_rank;
    std::optional<double> tol_residual;
    std::string format;
    std::string out_path;
    bool json_output = false;

    ToleranceConfig tolerance() const {
        ToleranceConfig tol;
        tol.rank_rel = tol_rank;
        if (tol_residual) {
            tol.residual_rel = *tol_residual;
        }
        tol.validate();
        return tol;
    }
};

json matrix_json(const Matrix& m) {
    json re = json::array();
    json im = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json re_row = json::array();
        json im_row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            re_row.push_back(m(i, j).real());
            im_row.push_back(m(i, j).imag());
        }
        re.push_back(std::move(re_row));
        im.push_back(std::move(im_row));
    }
    return {{"rows", m.rows()}, {"cols", m.cols()}, {"real", re}, {"imag", im}};
}

std::uint64_t default_seed() {
    if (const char* env = std::getenv("OPQUOT_SEED")) {
        try {
            return std::stoull(env);
        } catch (const std::exception&) {
            throw Error(ErrorKind::ParseError, std::string("OPQUOT_SEED is not an unsigned integer: ") + env);
        }
    }
    return 0;
}

class Session {
public:
    Session(const GlobalOptions& opts, std::ostream& out) : opts_(opts), out_(out) {}

    io::Format format_for(const std::filesystem::path& path) const {
        if (!opts_.format.empty()) {
            return *io::parse_format(opts_.format);
        }
        return path.empty() ? io::Format::MatrixMarket : io::format_for_path(path);
    }

    /// Writes one named result matrix (plus scalar annotations) to --out or stdout.
    void emit(const std::string& name, const Matrix& m, const std::vector<std::pair<std::string, double>>& extras = {},
              const std::filesystem::path& path_override = {}) const {
        const std::filesystem::path path = path_override.empty() ? std::filesystem::path(opts_.out_path) : path_override;
        if (opts_.json_output) {
            json j = {{name, matrix_json(m)}};
            for (const auto& [key, value] : extras) {
                j[key] = value;
            }
            if (!path.empty()) {
                j["written_to"] = path.string();
                io::write_matrix(m, path, format_for(path), comments(name, extras));
            }
            out_ << j.dump(2) << '\n';
            return;
        }
        if (!path.empty()) {
            io::write_matrix(m, path, format_for(path), comments(name, extras));
            for (const auto& [key, value] : extras) {
                out_ << key << ' ' << io::format_double(value) << '\n';
            }
            return;
        }
        out_ << io::format_matrix(m, format_for({}), comments(name, extras));
    }

    std::ostream& out() const { return out_; }
    const GlobalOptions& options() const { return opts_; }

private:
    static std::vector<std::string> comments(const std::string& name,
                                             const std::vector<std::pair<std::string, double>>& extras) {
        std::vector<std::string> lines{name};
        for (const auto& [key, value] : extras) {
            lines.push_back(key + " = " + io::format_double(value));
        }
        return lines;
    }

    const GlobalOptions& opts_;
    std::ostream& out_;
};

std::filesystem::path suffixed(const std::filesystem::path& path, const std::string& suffix) {
    std::filesystem::path out = path;
    out.replace_filename(path.stem().string() + "_" + suffix + path.extension().string());
    return out;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Left and right quotients of matrices: Douglas solutions, duality, sums and products"};
    app.name(args.empty() ? "opquot" : args.front());
    app.require_subcommand(1);
    app.fallthrough();

    GlobalOptions opts;
    app.add_option("--tol-rank", opts.tol_rank, "relative singular-value cutoff for numerical rank")
        ->check(CLI::NonNegativeNumber);
    app.add_option("--tol-residual", opts.tol_residual, "relative residual threshold")->check(CLI::NonNegativeNumber);
    app.add_option("--format", opts.format, "output format")->check(CLI::IsMember({"mm", "csv"}));
    app.add_option("--out", opts.out_path, "write the result matrix to this path");
    app.add_flag("--json", opts.json_output, "emit results as JSON");

    std::function<int(const Session&)> action;

    // pinv <M>
    std::string pinv_path;
    auto* pinv = app.add_subcommand("pinv", "Moore-Penrose pseudoinverse");
    pinv->add_option("M", pinv_path)->required();
    pinv->callback([&] {
        action = [&](const Session& s) {
            s.emit("pinv", pseudoinverse(io::read_matrix(pinv_path), s.options().tolerance()));
            return kSuccess;
        };
    });

    // ldiv <B> <A>
    std::string ldiv_b, ldiv_a;
    auto* ldiv = app.add_subcommand("ldiv", "left quotient [B\\A] = B^+ A");
    ldiv->add_option("B", ldiv_b)->required();
    ldiv->add_option("A", ldiv_a)->required();
    ldiv->callback([&] {
        action = [&](const Session& s) {
            const ToleranceConfig tol = s.options().tolerance();
            const LeftQuotient lq = left_quotient(io::read_matrix(ldiv_a), io::read_matrix(ldiv_b), tol);
            s.emit("q", lq.q(), {{"norm", left_norm(lq)}});
            return kSuccess;
        };
    });

    // rdiv <A> <B>
    std::string rdiv_a, rdiv_b;
    auto* rdiv = app.add_subcommand("rdiv", "right quotient [A/B] = A B^+");
    rdiv->add_option("A", rdiv_a)->required();
    rdiv->add_option("B", rdiv_b)->required();
    rdiv->callback([&] {
        action = [&](const Session& s) {
            const RightQuotient rq = right_quotient(io::read_matrix(rdiv_a), io::read_matrix(rdiv_b),
                                                    s.options().tolerance());
            s.emit("q", rq.q());
            return kSuccess;
        };
    });

    // check {range|kernel|mu} <X> <Y>
    std::string check_kind, check_x, check_y;
    auto* check = app.add_subcommand("check", "range: R(X) in R(Y); kernel: N(X) in N(Y); mu: inf{mu : XX^* <= mu YY^*}");
    check->add_option("predicate", check_kind)->required()->check(CLI::IsMember({"range", "kernel", "mu"}));
    check->add_option("X", check_x)->required();
    check->add_option("Y", check_y)->required();
    check->callback([&] {
        action = [&](const Session& s) {
            const ToleranceConfig tol = s.options().tolerance();
            const Matrix x = io::read_matrix(check_x);
            const Matrix y = io::read_matrix(check_y);
            json j = {{"predicate", check_kind}};
            std::string text;
            if (check_kind == "mu") {
                const double mu = oracle::mu_bisection(x, y, tol);
                j["value"] = std::isfinite(mu) ? json(mu) : json("inf");
                text = std::isfinite(mu) ? io::format_double(mu) : "inf";
            } else {
                const bool range = check_kind == "range";
                const double residual = range ? range_inclusion_residual(x, y, tol) : kernel_inclusion_residual(x, y, tol);
                const bool value = range ? range_included(x, y, tol) : kernel_included(x, y, tol);
                j["value"] = value;
                j["residual"] = residual;
                text = value ? "true" : "false";
            }
            s.out() << (s.options().json_output ? j.dump(2) : text) << '\n';
            return kSuccess;
        };
    });

    // sum-left <B> <A> <D> <C>
    std::string sl_b, sl_a, sl_d, sl_c;
    auto* sum_l = app.add_subcommand("sum-left", "[B\\A] + [D\\C] as a single left quotient");
    sum_l->add_option("B", sl_b)->required();
    sum_l->add_option("A", sl_a)->required();
    sum_l->add_option("D", sl_d)->required();
    sum_l->add_option("C", sl_c)->required();
    sum_l->callback([&] {
        action = [&](const Session& s) {
            const ToleranceConfig tol = s.options().tolerance();
            const LeftQuotient lq1 = left_quotient(io::read_matrix(sl_a), io::read_matrix(sl_b), tol);
            const LeftQuotient lq2 = left_quotient(io::read_matrix(sl_c), io::read_matrix(sl_d), tol);
            const LeftSum sum = sum_left(lq1, lq2, tol);
            s.emit("q", sum.quotient.q(), {{"defect", sum.defect}});
            return kSuccess;
        };
    });

    // sum-right <A> <B> <C> <D>
    std::string sr_a, sr_b, sr_c, sr_d;
    auto* sum_r = app.add_subcommand("sum-right", "[A/B] + [C/D] as a single right quotient");
    sum_r->add_option("A", sr_a)->required();
    sum_r->add_option("B", sr_b)->required();
    sum_r->add_option("C", sr_c)->required();
    sum_r->add_option("D", sr_d)->required();
    sum_r->callback([&] {
        action = [&](const Session& s) {
            const ToleranceConfig tol = s.options().tolerance();
            const RightQuotient rq1 = right_quotient(io::read_matrix(sr_a), io::read_matrix(sr_b), tol);
            const RightQuotient rq2 = right_quotient(io::read_matrix(sr_c), io::read_matrix(sr_d), tol);
            const RightSum sum = sum_right(rq1, rq2, tol);
            s.emit("q", sum.quotient.q(), {{"defect", sum.defect}});
            return kSuccess;
        };
    });

    // prod-left <B> <A> <D> <C> and prod-right <A> <B> <C> <D>
    std::string pl_1, pl_2, pl_3, pl_4, witness_m, witness_n;
    bool auto_witness = false;
    auto add_product = [&](const char* name, const char* help, std::array<const char*, 4> labels) {
        auto* sub = app.add_subcommand(name, help);
        sub->add_option(labels[0], pl_1)->required();
        sub->add_option(labels[1], pl_2)->required();
        sub->add_option(labels[2], pl_3)->required();
        sub->add_option(labels[3], pl_4)->required();
        auto* m_opt = sub->add_option("--witness-m", witness_m, "witness M");
        auto* n_opt = sub->add_option("--witness-n", witness_n, "witness N");
        m_opt->needs(n_opt);
        n_opt->needs(m_opt);
        auto* auto_opt = sub->add_flag("--auto", auto_witness, "construct the witness automatically");
        auto_opt->excludes(m_opt)->excludes(n_opt);
        sub->parse_complete_callback([&, name] {
            if (witness_m.empty() && !auto_witness) {
                throw CLI::ValidationError(std::string(name) + ": pass --witness-m and --witness-n, or --auto");
            }
        });
        return sub;
    };
    auto* prod_l = add_product("prod-left", "[B\\A][D\\C] = [NB\\MC] for a witness (M, N)", {"B", "A", "D", "C"});
    prod_l->callback([&] {
        action = [&](const Session& s) {
            const ToleranceConfig tol = s.options().tolerance();
            const LeftQuotient lq1 = left_quotient(io::read_matrix(pl_2), io::read_matrix(pl_1), tol);
            const LeftQuotient lq2 = left_quotient(io::read_matrix(pl_4), io::read_matrix(pl_3), tol);
            const ProductWitness w = witness_m.empty()
                                         ? auto_witness_left(lq1, lq2, tol)
                                         : check_witness_left(lq1, lq2, io::read_matrix(witness_m),
                                                              io::read_matrix(witness_n), tol);
            const LeftQuotient product = product_left(lq1, lq2, w, tol);
            s.emit("q", product.q(),
                   {{"compatibility_residual", w.compatibility_residual}, {"kernel_residual", w.kernel_residual}});
            return kSuccess;
        };
    });
    auto* prod_r = add_product("prod-right", "[A/B][C/D] = [A P M / DN] for a witness (M, N)", {"A", "B", "C", "D"});
    prod_r->callback([&] {
        action = [&](const Session& s) {
            const ToleranceConfig tol = s.options().tolerance();
            const RightQuotient rq1 = right_quotient(io::read_matrix(pl_1), io::read_matrix(pl_2), tol);
            const RightQuotient rq2 = right_quotient(io::read_matrix(pl_3), io::read_matrix(pl_4), tol);
            const ProductWitness w = witness_m.empty()
                                         ? auto_witness_right(rq1, rq2, tol)
                                         : check_witness_right(rq1, rq2, io::read_matrix(witness_m),
                                                               io::read_matrix(witness_n), tol);
            const RightQuotient product = product_right(rq1, rq2, w, tol);
            s.emit("q", product.q(),
                   {{"compatibility_residual", w.compatibility_residual}, {"kernel_residual", w.kernel_residual}});
            return kSuccess;
        };
    });

    // simplify {left|right} <M> <B> <A>
    std::string simp_side, simp_m, simp_b, simp_a;
    auto* simp = app.add_subcommand("simplify", "left: [MB\\MA] = [B\\A]; right: [AM/BM] = [A/B]");
    simp->add_option("side", simp_side)->required()->check(CLI::IsMember({"left", "right"}));
    simp->add_option("M", simp_m)->required();
    simp->add_option("B", simp_b)->required();
    simp->add_option("A", simp_a)->required();
    simp->callback([&] {
        action = [&](const Session& s) {
            const ToleranceConfig tol = s.options().tolerance();
            const Matrix m = io::read_matrix(simp_m);
            const Matrix b = io::read_matrix(simp_b);
            const Matrix a = io::read_matrix(simp_a);
            if (simp_side == "left") {
                s.emit("q", simplify_left(m, left_quotient(a, b, tol), tol).q());
            } else {
                s.emit("q", simplify_right(m, right_quotient(a, b, tol), tol).q());
            }
            return kSuccess;
        };
    });

    // decompose <A>
    std::string dec_a;
    auto* dec = app.add_subcommand("decompose", "A = [A^*\\A^*A] and A^+ = [A^*A\\A^*]");
    dec->add_option("A", dec_a)->required();
    dec->callback([&] {
        action = [&](const Session& s) {
            const CanonicalDecomposition d = canonical_decomposition(io::read_matrix(dec_a), s.options().tolerance());
            const std::filesystem::path out_path(s.options().out_path);
            if (s.options().json_output && out_path.empty()) {
                s.out() << json{{"first", matrix_json(d.first.q())}, {"second", matrix_json(d.second.q())}}.dump(2)
                        << '\n';
                return kSuccess;
            }
            s.emit("first [A*\\A*A]", d.first.q(), {}, out_path.empty() ? out_path : suffixed(out_path, "first"));
            s.emit("second [A*A\\A*]", d.second.q(), {}, out_path.empty() ? out_path : suffixed(out_path, "second"));
            return kSuccess;
        };
    });

    // verify <A> <B> [--mode left|right]
    std::string ver_a, ver_b, ver_mode = "left";
    std::optional<std::uint64_t> ver_seed;
    auto* ver = app.add_subcommand("verify", "run the invariant suite on one instance and print a JSON report");
    ver->add_option("A", ver_a)->required();
    ver->add_option("B", ver_b)->required();
    ver->add_option("--mode", ver_mode, "left or right quotient")->check(CLI::IsMember({"left", "right"}));
    ver->add_option("--seed", ver_seed, "seed for randomized probes");
    ver->callback([&] {
        action = [&](const Session& s) {
            const std::uint64_t seed = ver_seed ? *ver_seed : default_seed();
            VerificationReport report =
                verify_instance(io::read_matrix(ver_a), io::read_matrix(ver_b),
                                ver_mode == "left" ? VerifyMode::Left : VerifyMode::Right, seed, s.options().tolerance());
            report.instance["a_path"] = ver_a;
            report.instance["b_path"] = ver_b;
            s.out() << report.to_json().dump(2) << '\n';
            return report.all_passed() ? kSuccess : kVerificationFailed;
        };
    });

    // gen --mode X --m --n --p --rank --seed --out-prefix
    std::string gen_mode, gen_prefix;
    oracle::InstanceSpec spec;
    std::optional<std::uint64_t> gen_seed;
    auto* gen = app.add_subcommand("gen", "write a generated instance");
    gen->add_option("--mode", gen_mode,
                    "range_included, kernel_included, same_range, same_kernel, pinv_product_pair or witness_compatible")->required();
    gen->add_option("--m", spec.m, "rows of A")->check(CLI::PositiveNumber);
    gen->add_option("--n", spec.n, "columns of A")->check(CLI::PositiveNumber);
    gen->add_option("--p", spec.p, "B is m x p for range modes, p x n for kernel modes")->check(CLI::PositiveNumber);
    gen->add_option("--rank", spec.rank_b, "rank of B")->check(CLI::NonNegativeNumber);
    gen->add_option("--seed", gen_seed, "RNG seed, defaults to OPQUOT_SEED or 0");
    gen->add_flag("--stress", spec.stress, "place the smallest singular value at 1e-7");
    gen->add_option("--out-prefix", gen_prefix, "writes <prefix>_A, <prefix>_B and any witnesses")->required();
    gen->callback([&] {
        action = [&](const Session& s) {
            const auto mode = oracle::parse_mode(gen_mode);
            if (!mode) {
                throw Error(ErrorKind::InvalidSpec, "unknown generator mode '" + gen_mode + "'");
            }
            spec.mode = *mode;
            spec.seed = gen_seed ? *gen_seed : default_seed();
            const oracle::GeneratedInstance inst = oracle::generate(spec);
            const io::Format format = s.options().format.empty() ? io::Format::MatrixMarket
                                                                 : *io::parse_format(s.options().format);
            const std::string ext = format == io::Format::Csv ? ".csv" : ".mm";
            const bool pair = spec.mode == oracle::Mode::PinvProductPair;
            std::vector<std::pair<std::string, const Matrix*>> files{{pair ? "S" : "A", &inst.a},
                                                                     {pair ? "T" : "B", &inst.b}};
            if (inst.witness) {
                files.push_back({"C", &inst.c});
                files.push_back({"D", &inst.d});
                files.push_back({"M", &inst.witness->m});
                files.push_back({"N", &inst.witness->n});
            }
            const std::vector<std::string> comments{"mode " + std::string(oracle::to_string(spec.mode)),
                                                    "seed " + std::to_string(spec.seed)};
            for (const auto& [role, m] : files) {
                const std::string path = gen_prefix + "_" + role + ext;
                io::write_matrix(*m, path, format, comments);
                s.out() << path << '\n';
            }
            return kSuccess;
        };
    });

    std::vector<const char*> argv;
    argv.reserve(args.size());
    for (const auto& a : args) {
        argv.push_back(a.c_str());
    }
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kParseError;
    }

    try {
        const Session session(opts, out);
        return action(session);
    } catch (const ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kParseError;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        if (e.is_precondition() || e.kind() == ErrorKind::InvalidSpec) {
            err << "residual: " << io::format_double(e.residual()) << '\n';
            return kPreconditionViolated;
        }
        if (e.kind() == ErrorKind::IoError || e.kind() == ErrorKind::NonFinite || e.kind() == ErrorKind::ParseError) {
            return kParseError;
        }
        return kVerificationFailed;
    }
}

} // namespace opquot::cli
