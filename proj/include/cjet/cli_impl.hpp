#ifndef CJET_CLI_IMPL_HPP
#define CJET_CLI_IMPL_HPP

#include "io.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace cjet::cli {

namespace detail {

/// Option payloads are inline JSON, or a file when prefixed with '@'.
inline io::json json_arg(const std::string &arg) {
    if (!arg.empty() && arg[0] == '@') {
        std::ifstream in(arg.substr(1));
        if (!in)
            throw std::invalid_argument("cannot open " + arg.substr(1));
        io::json j;
        in >> j;
        return j;
    }
    return io::json::parse(arg);
}

struct UsageError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

} // namespace detail

/// Exit codes: 0 success, 1 usage or parse failure, 2 mathematical
/// obstruction (validation failure, non-horizontal data, contact violation,
/// empty prolongation domain, non-factorable map), 3 internal certificate
/// failure.
inline int run(const std::vector<std::string> &args) {
    CLI::App app{"exact jet spaces, contact prolongation and embeddings over stratified Lie groups"};
    app.require_subcommand(1);
    std::ostream &os = std::cout;

    std::string alg_arg, point_arg, map_arg, poly_arg, x_arg, y_arg, p_arg, q_arg;
    int m = 0, wdim = 1;

    int exit_code = 0;
    auto emit = [&](const io::json &j) { os << j.dump(2) << "\n"; };

    auto *validate = app.add_subcommand("validate", "validate a stratified algebra");
    validate->add_option("algebra", alg_arg)->required();
    validate->callback([&] {
        auto alg = io::load_algebra(alg_arg);
        auto rep = alg->validate();
        io::json j{{"jacobi", rep.jacobi},
                   {"grading", rep.grading},
                   {"bracket_generating", rep.bracket_generating},
                   {"decomposition", rep.decomp_consistent},
                   {"ok", rep.ok()},
                   {"failures", rep.failures}};
        emit(j);
        if (!rep.ok())
            exit_code = 2;
    });

    auto *bch_cmd = app.add_subcommand("bch", "group product in exponential coordinates");
    bch_cmd->add_option("algebra", alg_arg)->required();
    bch_cmd->add_option("--x", x_arg)->required();
    bch_cmd->add_option("--y", y_arg)->required();
    bch_cmd->callback([&] {
        auto alg = io::load_algebra(alg_arg);
        AlgElem x(alg, io::ratvec_from(detail::json_arg(x_arg)));
        AlgElem y(alg, io::ratvec_from(detail::json_arg(y_arg)));
        emit(io::ratvec_json(bch(x, y).coords));
    });

    auto *tau_cmd = app.add_subcommand("tau-table", "tau coefficients on tensor words");
    tau_cmd->add_option("algebra", alg_arg)->required();
    tau_cmd->add_option("m", m)->required();
    tau_cmd->callback([&] { emit(io::tau_table_json(io::load_algebra(alg_arg), m)); });

    auto *hd_cmd = app.add_subcommand("hd-basis", "basis of the horizontal derivative space");
    hd_cmd->add_option("algebra", alg_arg)->required();
    hd_cmd->add_option("m", m)->required();
    hd_cmd->callback([&] { emit(io::hd_basis_json(io::load_algebra(alg_arg), m)); });

    auto *dual_cmd = app.add_subcommand("dual-poly-basis",
                                        "polynomial basis dual to the operator monomials");
    dual_cmd->add_option("algebra", alg_arg)->required();
    dual_cmd->add_option("m", m)->required();
    dual_cmd->add_option("--point", point_arg);
    dual_cmd->callback([&] {
        auto alg = io::load_algebra(alg_arg);
        AlgElem p = point_arg.empty() ? AlgElem::zero(alg)
                                      : AlgElem(alg, io::ratvec_from(detail::json_arg(point_arg)));
        emit(io::dual_poly_basis_json(p, m));
    });

    auto *taylor_cmd = app.add_subcommand("taylor", "homogeneous Taylor components");
    taylor_cmd->add_option("algebra", alg_arg)->required();
    taylor_cmd->add_option("m", m)->required();
    taylor_cmd->add_option("--poly", poly_arg)->required();
    taylor_cmd->add_option("--point", point_arg)->required();
    taylor_cmd->callback([&] {
        auto alg = io::load_algebra(alg_arg);
        io::json pj = detail::json_arg(poly_arg);
        int w = pj.contains("wdim") ? pj.at("wdim").get<int>() : 1;
        WPoly f = io::wpoly_from_json(alg, w, pj.contains("terms") ? pj.at("terms") : pj);
        AlgElem p(alg, io::ratvec_from(detail::json_arg(point_arg)));
        auto comps = taylor(f, p, m);
        io::json out = io::json::array();
        for (int k = 0; k <= m; ++k)
            out.push_back(io::json{{"degree", k}, {"poly", io::wpoly_json(comps[k])}});
        emit(out);
    });

    auto *jalg_cmd = app.add_subcommand("jet-algebra", "structure constants of the jet algebra");
    jalg_cmd->add_option("algebra", alg_arg)->required();
    jalg_cmd->add_option("wdim", wdim)->required();
    jalg_cmd->add_option("m", m)->required();
    jalg_cmd->callback(
        [&] { emit(io::jet_algebra_json(JetSpace(io::load_algebra(alg_arg), wdim, m))); });

    auto *mul_cmd = app.add_subcommand("jet-mul", "jet group product");
    mul_cmd->add_option("algebra", alg_arg)->required();
    mul_cmd->add_option("wdim", wdim)->required();
    mul_cmd->add_option("m", m)->required();
    mul_cmd->add_option("--p", p_arg)->required();
    mul_cmd->add_option("--q", q_arg)->required();
    mul_cmd->callback([&] {
        JetSpace js(io::load_algebra(alg_arg), wdim, m);
        JetPoint p = io::point_from_json(js, detail::json_arg(p_arg));
        JetPoint q = io::point_from_json(js, detail::json_arg(q_arg));
        emit(io::point_json(js, jet_multiply(js, p, q)));
    });

    auto *exp_cmd = app.add_subcommand("jet-exp", "jet group exponential");
    exp_cmd->add_option("algebra", alg_arg)->required();
    exp_cmd->add_option("wdim", wdim)->required();
    exp_cmd->add_option("m", m)->required();
    exp_cmd->add_option("--x", x_arg)->required();
    exp_cmd->callback([&] {
        JetSpace js(io::load_algebra(alg_arg), wdim, m);
        JetPoint v = io::point_from_json(js, detail::json_arg(x_arg));
        emit(io::point_json(js, jet_exp(js, v)));
    });

    auto *cc_cmd = app.add_subcommand("contact-check", "verify the contact conditions of a map");
    cc_cmd->add_option("algebra", alg_arg)->required();
    cc_cmd->add_option("wdim", wdim)->required();
    cc_cmd->add_option("m", m)->required();
    cc_cmd->add_option("--map", map_arg)->required();
    cc_cmd->callback([&] {
        io::json mj = detail::json_arg(map_arg);
        if (!mj.contains("algebra")) {
            mj["algebra"] = io::algebra_json(io::load_algebra(alg_arg));
            mj["wdim"] = wdim;
            mj["m"] = m;
        }
        PolyMap f = io::map_from_json(mj);
        auto check = is_contact(f);
        io::json out{{"certified", check.certified}};
        if (!check.certified) {
            out["form"] = check.form;
            out["level"] = check.level;
            out["frame_index"] = check.frame_index;
            out["witness"] = io::poly_json(check.witness);
            exit_code = 2;
        }
        emit(out);
    });

    auto *pro_cmd = app.add_subcommand("prolong", "pointwise contact prolongation");
    pro_cmd->add_option("algebra", alg_arg)->required();
    pro_cmd->add_option("wdim", wdim)->required();
    pro_cmd->add_option("m", m)->required();
    pro_cmd->add_option("--map", map_arg)->required();
    pro_cmd->add_option("--point", point_arg)->required();
    pro_cmd->callback([&] {
        io::json mj = detail::json_arg(map_arg);
        if (!mj.contains("algebra")) {
            mj["algebra"] = io::algebra_json(io::load_algebra(alg_arg));
            mj["wdim"] = wdim;
            mj["m"] = m;
        }
        PolyMap f = io::map_from_json(mj);
        auto check = is_contact(f);
        if (!check.certified)
            throw ObstructionError("prolong: the map is not contact");
        f.contact_certified = true;
        JetSpace above(f.space.alg(), f.space.wdim(), f.space.order() + 1);
        JetPoint p_hat = io::point_from_json(above, detail::json_arg(point_arg));
        emit(io::point_json(above, prolong_point(f, above, p_hat)));
    });

    auto *dep_cmd = app.add_subcommand("deprolong", "factor a contact map through the projection");
    dep_cmd->add_option("--map", map_arg)->required();
    dep_cmd->callback([&] {
        PolyMap f = io::map_from_json(detail::json_arg(map_arg));
        auto res = deprolong(f);
        if (!res.ok) {
            io::json out{{"ok", false},
                         {"component", res.obstruction_component},
                         {"obstruction", io::poly_json(res.obstruction)}};
            if (res.base_case)
                out["hypotheses_hold"] = res.hypotheses_hold;
            emit(out);
            exit_code = 2;
            return;
        }
        io::json out{{"ok", true}, {"map", io::map_json(*res.factored)}};
        if (res.base_case)
            out["hypotheses_hold"] = res.hypotheses_hold;
        emit(out);
    });

    auto *embed_cmd = app.add_subcommand("embed", "embed a group into jets over its quotient");
    embed_cmd->add_option("algebra", alg_arg)->required();
    embed_cmd->callback([&] { emit(io::embed_json(embed(io::load_algebra(alg_arg)))); });

    auto *report_cmd = app.add_subcommand("heisenberg-report", "all worked-example tables");
    report_cmd->callback([&] { os << io::heisenberg_report(); });

    try {
        // CLI11 consumes the vector back to front
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError &e) {
        return app.exit(e) == 0 ? 0 : 1;
    } catch (const ObstructionError &e) {
        std::cerr << "obstruction: " << e.what() << "\n";
        return 2;
    } catch (const CertificateError &e) {
        std::cerr << "certificate failure: " << e.what() << "\n";
        return 3;
    } catch (const std::logic_error &e) {
        std::cerr << "certificate failure: " << e.what() << "\n";
        return 3;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return exit_code;
}

} // namespace cjet::cli

#endif
