#pragma once

// Command-line front end: subcommands, key=value config files, report
// emission and the exit-code contract (0 pass, 1 failed check, 2 bad input).

#include <chrono>
#include <functional>
#include <iostream>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "parahoric/building.hpp"
#include "parahoric/chains.hpp"
#include "parahoric/character_table.hpp"
#include "parahoric/harish_chandra.hpp"
#include "parahoric/intersection.hpp"
#include "parahoric/orbit.hpp"
#include "parahoric/report.hpp"
#include "parahoric/sweep.hpp"

namespace parahoric {

inline constexpr std::uint64_t kDefaultSeed = 20240611;

namespace cli {

inline std::vector<int> parse_int_list(const std::string& s) {
    std::vector<int> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        try {
            std::size_t used = 0;
            out.push_back(std::stoi(tok, &used));
            if (used != tok.size()) throw std::invalid_argument(tok);
        } catch (const std::logic_error&) {
            throw ArgumentError("not an integer list: " + s);
        }
    }
    return out;
}

/// "identity", "d:b_1,..,b_e", "w:w_1,..,w_e" or "w:...;d:...", with w the
/// 0-based images of the f-blocks as printed in reports.
inline AffineWeylElem parse_weyl(const std::string& s, int f, int e0) {
    if (s.empty() || s == "identity") return AffineWeylElem::identity(f, e0);
    std::vector<int> w(e0), b(e0, 0);
    std::iota(w.begin(), w.end(), 0);
    std::stringstream ss(s);
    std::string part;
    while (std::getline(ss, part, ';')) {
        if (part.size() < 2 || part[1] != ':' || (part[0] != 'w' && part[0] != 'd'))
            throw ArgumentError("cannot parse Weyl element: " + s);
        const auto v = parse_int_list(part.substr(2));
        if (static_cast<int>(v.size()) != e0) throw ArgumentError("Weyl element has the wrong length: " + s);
        (part[0] == 'w' ? w : b) = v;
    }
    try {
        return {f, w, b};
    } catch (const ShapeError& e) {
        throw ArgumentError(std::string("invalid Weyl element: ") + e.what());
    }
}

/// ';'-separated comma lists, e.g. "2;1,1".
inline std::vector<std::vector<int>> parse_shape_list(const std::string& s) {
    std::vector<std::vector<int>> out;
    std::stringstream ss(s);
    std::string part;
    while (std::getline(ss, part, ';'))
        if (!part.empty()) out.push_back(parse_int_list(part));
    return out;
}

/// Inverse of the config-file reader for a report's config echo: integer
/// lists are joined by ',' and lists of lists by ';'.
inline std::string config_file_text(const Json& config) {
    std::ostringstream os;
    for (const auto& [key, value] : config.items()) {
        os << key << '=';
        if (value.is_array()) {
            for (std::size_t i = 0; i < value.size(); ++i) {
                if (i) os << (value[i].is_array() ? ";" : ",");
                if (value[i].is_array()) {
                    for (std::size_t k = 0; k < value[i].size(); ++k) os << (k ? "," : "") << value[i][k].dump();
                } else {
                    os << value[i].dump();
                }
            }
        } else if (value.is_string()) {
            os << value.get<std::string>();
        } else {
            os << value.dump();
        }
        os << '\n';
    }
    return os.str();
}

inline int trivial_index(const CharacterTable& T) {
    for (int i = 0; i < T.size(); ++i)
        if (T[i] == trivial_character(T.group)) return i;
    throw InvariantError("character table lacks the trivial character");
}

/// Options shared by every subcommand.
struct Common {
    std::string output;
    std::string config;
    bool timing = false;

    void attach(CLI::App* sub) {
        sub->add_option("--output", output, "write the JSON report here ('-' for standard output)");
        sub->add_option("--config", config, "key=value file; command-line flags take precedence");
        sub->add_flag("--timing", timing, "record wall time in the report summary");
    }
};

/// Splices the items of a key=value config file into the argument list
/// right after the subcommand, skipping keys given on the command line.
inline std::vector<std::string> expand_config(const std::vector<std::string>& args, const std::set<std::string>& subcommands) {
    std::string path;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
        if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
    }
    if (path.empty()) return args;
    std::vector<CLI::ConfigItem> items;
    try {
        // '#' starts a comment so that ';' stays available inside values.
        CLI::ConfigINI reader;
        reader.comment('#');
        items = reader.from_file(path);
    } catch (const CLI::FileError&) {
        throw ArgumentError("cannot read config file: " + path);
    }
    std::vector<std::string> injected;
    for (const auto& item : items) {
        if (item.name.empty() || item.name == "++" || item.name == "--") continue;
        const std::string flag = "--" + item.name;
        bool given = false;
        for (const auto& a : args)
            if (a == flag || a.rfind(flag + "=", 0) == 0) given = true;
        if (given) continue;
        std::string value;
        for (std::size_t i = 0; i < item.inputs.size(); ++i) value += (i ? "," : "") + item.inputs[i];
        injected.push_back(flag + "=" + value);
    }
    std::vector<std::string> out;
    bool done = false;
    for (const auto& a : args) {
        out.push_back(a);
        if (!done && subcommands.count(a)) {
            out.insert(out.end(), injected.begin(), injected.end());
            done = true;
        }
    }
    return out;
}

}  // namespace cli

/// Runs the command line; returns the process exit code.
inline int run_cli(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    using Clock = std::chrono::steady_clock;
    const auto t0 = Clock::now();

    CLI::App app{"Finite-quotient experiments for depth-zero parahoric types of GL_R"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kToolVersion);

    cli::Common common;
    std::function<Report()> action;

    // char-table
    int ct_n = 2, ct_q = 2;
    auto* ct = app.add_subcommand("char-table", "character table of GL_n(F_q)");
    ct->add_option("--n", ct_n)->required()->check(CLI::Range(1, 8));
    ct->add_option("--q", ct_q)->required()->check(CLI::Range(2, 1 << 12));
    common.attach(ct);

    // cuspidals
    int cu_n = 2, cu_q = 2;
    auto* cu = app.add_subcommand("cuspidals", "cuspidal irreducibles of GL_n(F_q)");
    cu->add_option("--n", cu_n)->required()->check(CLI::Range(1, 8));
    cu->add_option("--q", cu_q)->required()->check(CLI::Range(2, 1 << 12));
    common.attach(cu);

    // lemma-verify
    int lv_q = 2, lv_f = 1, lv_e0 = 2, lv_rho = -1;
    std::string lv_shape, lv_tau = "all", lv_x = "identity", lv_scaling;
    auto* lv = app.add_subcommand("lemma-verify", "Hom dimensions over H(x) against x = 1");
    lv->add_option("--q", lv_q)->required()->check(CLI::Range(2, 1 << 12));
    lv->add_option("--f", lv_f)->required()->check(CLI::Range(1, 8));
    lv->add_option("--e0", lv_e0)->required()->check(CLI::Range(1, 8));
    lv->add_option("--shape", lv_shape, "block sizes of B, comma separated (default: maximal)");
    lv->add_option("--rho", lv_rho, "index of the cuspidal rho_0 (default: first cuspidal)");
    lv->add_option("--tau", lv_tau, "trivial | all | support | comma-separated factor indices");
    lv->add_option("--x", lv_x, "identity | d:b_1,.. | w:w_1,.. | w:..;d:..");
    lv->add_option("--scaling", lv_scaling, "unit identifications t_1,..,t_R");
    common.attach(lv);

    // lemma-sweep
    std::string ls_q = "2,3", ls_f = "1,2", ls_e0 = "2,3", ls_filter = "all";
    std::string ls_shapes;
    int ls_bound = 2, ls_max_R = 4, ls_threads = 0;
    double ls_robust = 0.0;
    std::uint64_t ls_seed = kDefaultSeed;
    auto* ls = app.add_subcommand("lemma-sweep", "the lemma over a parameter grid");
    ls->add_option("--q", ls_q, "comma-separated residue field orders");
    ls->add_option("--f", ls_f, "comma-separated values of f");
    ls->add_option("--e0", ls_e0, "comma-separated values of e0");
    ls->add_option("--bound", ls_bound, "exponent spread bound")->check(CLI::Range(0, 6));
    ls->add_option("--max-R", ls_max_R)->check(CLI::Range(1, 6));
    ls->add_option("--shape", ls_shapes, "restrict to these shapes, ';'-separated (e.g. 2;1,1)");
    ls->add_option("--tau-filter", ls_filter)->check(CLI::IsMember({"all", "support"}));
    ls->add_option("--threads", ls_threads, "worker count (0: hardware)")->check(CLI::Range(0, 256));
    ls->add_option("--robustness", ls_robust, "fraction of cells recomputed with random unit scalings")->check(CLI::Range(0.0, 1.0));
    ls->add_option("--seed", ls_seed, "seed for the robustness sample");
    common.attach(ls);

    // building
    int bd_R = 2, bd_q = 2, bd_radius = 1;
    BuildingLimits limits;
    auto* bd = app.add_subcommand("building", "export a truncated building");
    bd->add_option("--R", bd_R)->check(CLI::Range(1, kBuildingRankCap));
    bd->add_option("--q", bd_q)->check(CLI::Range(2, 1 << 12));
    bd->add_option("--radius", bd_radius)->check(CLI::Range(0, kBuildingRadiusCap));
    bd->add_option("--max-R", limits.max_R, "rank limit")->check(CLI::Range(1, kBuildingRankCap));
    bd->add_option("--max-radius", limits.max_radius, "radius limit")->check(CLI::Range(0, kBuildingRadiusCap));
    common.attach(bd);

    // complex-check
    int cc_R = 2, cc_q = 2, cc_radius = 1;
    std::string cc_system = "all";
    auto* cc = app.add_subcommand("complex-check", "simplicial identities and the order dictionary");
    cc->add_option("--R", cc_R)->check(CLI::Range(1, kBuildingRankCap));
    cc->add_option("--q", cc_q)->check(CLI::Range(2, 1 << 12));
    cc->add_option("--radius", cc_radius)->check(CLI::Range(0, kBuildingRadiusCap));
    cc->add_option("--max-R", limits.max_R, "rank limit")->check(CLI::Range(1, kBuildingRankCap));
    cc->add_option("--max-radius", limits.max_radius, "radius limit")->check(CLI::Range(0, kBuildingRadiusCap));
    cc->add_option("--system", cc_system)->check(CLI::IsMember({"all", "scalar", "neighbor"}));
    common.attach(cc);

    // orbit-check
    std::string oc_q = "2,3", oc_e0 = "2,3", oc_face, oc_x, oc_tau = "support";
    int oc_f = 1, oc_bound = 1, oc_rho = -1, oc_threads = 0;
    auto* oc = app.add_subcommand("orbit-check", "depth-zero orbit Hom dimensions on chamber faces");
    oc->add_option("--q", oc_q, "comma-separated residue field orders");
    oc->add_option("--e0", oc_e0, "comma-separated values of e0");
    oc->add_option("--f", oc_f)->check(CLI::Range(1, 4));
    oc->add_option("--bound", oc_bound, "exponent spread bound")->check(CLI::Range(0, 4));
    oc->add_option("--face", oc_face, "chamber vertices m (default: every face)");
    oc->add_option("--x", oc_x, "a single Weyl element (default: all within the bound)");
    oc->add_option("--rho", oc_rho, "index of the cuspidal rho_0 (default: all cuspidals)");
    oc->add_option("--tau", oc_tau, "support | ';'-separated factor index lists");
    oc->add_option("--threads", oc_threads)->check(CLI::Range(0, 256));
    common.attach(oc);

    ct->callback([&] {
        action = [&] {
            const auto T = TableCache::instance().table(ct_n, field_of_order(ct_q));
            const auto& G = *T->group;
            Json config;
            config["n"] = ct_n;
            config["q"] = ct_q;
            Report rep("char-table", config);
            Json classes = Json::array();
            for (const auto& c : G.classes()) classes.push_back(Json{{"size", c.size}, {"element_order", c.element_order}});
            rep.set_extra("group_order", G.order());
            rep.set_extra("classes", classes);
            std::int64_t sq = 0;
            for (int i = 0; i < T->size(); ++i) {
                const auto& chi = (*T)[i];
                sq += chi.degree() * chi.degree();
                Json values = Json::array();
                for (const auto& v : chi.values) values.push_back(v.to_string());
                rep.add(Json{{"index", i}, {"degree", chi.degree()}, {"cuspidal", is_cuspidal(chi)}, {"values", values}}, true);
            }
            std::string degrees;
            for (int i = 0; i < T->size(); ++i) degrees += (i ? "," : "") + std::to_string((*T)[i].degree());
            rep.note("GL_" + std::to_string(ct_n) + "(F_" + std::to_string(ct_q) + "): order " + std::to_string(G.order()) + ", " +
                     std::to_string(T->size()) + " irreducibles, degrees " + degrees);
            const bool orth = verify_orthogonality(*T);
            rep.add(Json{{"check", "orthogonality"}, {"passed", orth}}, orth);
            rep.add(Json{{"check", "sum_of_squared_degrees"}, {"value", sq}, {"group_order", G.order()}}, sq == G.order());
            return rep;
        };
    });

    cu->callback([&] {
        action = [&] {
            const auto T = TableCache::instance().table(cu_n, field_of_order(cu_q));
            Json config;
            config["n"] = cu_n;
            config["q"] = cu_q;
            Report rep("cuspidals", config);
            const auto idx = cuspidal_indices(*T);
            rep.set_extra("count", idx.size());
            std::string list;
            for (int i : idx) list += (list.empty() ? "" : ",") + std::to_string(i);
            rep.note(std::to_string(idx.size()) + " cuspidal irreducibles: " + (list.empty() ? "none" : list));
            for (int i : idx) rep.add(Json{{"index", i}, {"degree", (*T)[i].degree()}}, true);
            return rep;
        };
    });

    lv->callback([&] {
        action = [&] {
            const auto field = field_of_order(lv_q);
            const BlockShape shape = lv_shape.empty() ? BlockShape({lv_f * lv_e0}) : BlockShape(cli::parse_int_list(lv_shape));
            if (shape.R() != lv_f * lv_e0) throw ArgumentError("shape does not sum to f * e0");
            const auto x = cli::parse_weyl(lv_x, lv_f, lv_e0);
            const auto glf = TableCache::instance().table(lv_f, field);
            int rho = lv_rho;
            if (rho < 0) {
                const auto c = cuspidal_indices(*glf);
                if (c.empty()) throw ArgumentError("GL_f(F_q) has no cuspidal irreducible");
                rho = c.front();
            }
            const auto rho_char = tensor_power(cuspidal_rho0(lv_f, field, rho), lv_e0);
            std::vector<Fq> scaling;
            for (int t : cli::parse_int_list(lv_scaling)) scaling.push_back(static_cast<Fq>(t));
            std::vector<std::vector<int>> taus;
            if (lv_tau == "trivial") {
                std::vector<int> idx;
                for (int n : shape.parts()) idx.push_back(cli::trivial_index(*TableCache::instance().table(n, field)));
                taus.push_back(idx);
            } else if (lv_tau == "all" || lv_tau == "support") {
                for (const auto& [idx, tau] : levi_irreducibles(shape.parts(), field))
                    if (lv_tau == "all" || cuspidal_support_matches(tau, rho_char)) taus.push_back(idx);
            } else {
                taus.push_back(cli::parse_int_list(lv_tau));
            }
            Json config;
            config["q"] = lv_q;
            config["f"] = lv_f;
            config["e0"] = lv_e0;
            config["shape"] = shape.parts();
            config["rho"] = rho;
            config["tau"] = lv_tau;
            config["x"] = x.to_string();
            config["scaling"] = scaling;
            Report rep("lemma-verify", config);
            for (const auto& t : taus) {
                const auto r = lemma_check(field, lv_f, lv_e0, shape, rho, t, x, kDefaultQuotientBound, scaling);
                rep.add(lemma_record(r), r.equal && r.error.empty());
            }
            return rep;
        };
    });

    ls->callback([&] {
        action = [&] {
            LemmaGrid grid;
            grid.qs = cli::parse_int_list(ls_q);
            grid.fs = cli::parse_int_list(ls_f);
            grid.e0s = cli::parse_int_list(ls_e0);
            grid.bound = ls_bound;
            grid.max_R = ls_max_R;
            grid.shapes = cli::parse_shape_list(ls_shapes);
            grid.tau_filter = ls_filter;
            grid.threads = ls_threads;
            for (int q : grid.qs) field_of_order(q);
            Json config;
            config["q"] = grid.qs;
            config["f"] = grid.fs;
            config["e0"] = grid.e0s;
            config["bound"] = grid.bound;
            config["max-R"] = grid.max_R;
            config["shape"] = grid.shapes;
            config["tau-filter"] = grid.tau_filter;
            config["threads"] = grid.threads;
            config["robustness"] = ls_robust;
            config["seed"] = ls_seed;
            Report rep("lemma-sweep", config);
            const auto res = lemma_sweep(grid);
            for (const auto& c : res.cells) rep.add(lemma_record(c), c.equal && c.error.empty());
            if (ls_robust > 0) {
                std::size_t sampled = 0;
                const auto changed = unit_scaling_check(res.cells, ls_robust, ls_seed, &sampled);
                rep.add(Json{{"check", "unit_scaling_independence"}, {"sampled", sampled}, {"changed", changed}}, changed.empty());
            }
            return rep;
        };
    });

    bd->callback([&] {
        action = [&] {
            const auto X = truncated_building(bd_R, field_of_order(bd_q), bd_radius, limits);
            Json config;
            config["R"] = bd_R;
            config["q"] = bd_q;
            config["radius"] = bd_radius;
            Report rep("building", config);
            rep.set_extra("complex", complex_json(X));
            bool closed = true;
            for (int d = 1; d <= X.dimension(); ++d)
                for (const auto& s : X.simplices(d))
                    for (std::size_t i = 0; i < s.size(); ++i) {
                        auto face = s;
                        face.erase(face.begin() + static_cast<long>(i));
                        closed = closed && X.has_simplex(face);
                    }
            rep.add(Json{{"check", "face_closure"}, {"passed", closed}}, closed);
            if (bd_R == 2) {
                // A ball in the (q+1)-regular tree.
                long expect = 1, layer = bd_q + 1;
                for (int r = 1; r <= bd_radius; ++r, layer *= bd_q) expect += layer;
                const long got = static_cast<long>(X.vertices().size());
                rep.add(Json{{"check", "tree_ball_size"}, {"vertices", got}, {"expected", expect}}, got == expect);
            }
            return rep;
        };
    });

    cc->callback([&] {
        action = [&] {
            const auto X = truncated_building(cc_R, field_of_order(cc_q), cc_radius, limits);
            Json config;
            config["R"] = cc_R;
            config["q"] = cc_q;
            config["radius"] = cc_radius;
            config["system"] = cc_system;
            Report rep("complex-check", config);
            const ScalarSystem scalar;
            const NeighborSystem neighbor(X);
            std::vector<const CoefficientSystem*> systems;
            if (cc_system != "neighbor") systems.push_back(&scalar);
            if (cc_system != "scalar") systems.push_back(&neighbor);
            for (const auto* C : systems) {
                const auto r = simplicial_checks(X, *C);
                rep.add(simplicial_record(r), r.passed());
            }
            return rep;
        };
    });

    oc->callback([&] {
        action = [&] {
            const auto qs = cli::parse_int_list(oc_q);
            const auto e0s = cli::parse_int_list(oc_e0);
            const auto face_filter = cli::parse_int_list(oc_face);
            std::vector<std::vector<int>> tau_override;
            if (oc_tau != "support") {
                std::stringstream ss(oc_tau);
                std::string part;
                while (std::getline(ss, part, ';')) tau_override.push_back(cli::parse_int_list(part));
            }
            struct Job {
                FieldPtr field;
                int e0;
                std::size_t spec;
                std::vector<int> face;
                AffineWeylElem x;
            };
            std::vector<Job> jobs;
            std::vector<DepthZeroCoefficientSpec> specs;
            for (int q : qs) {
                const auto field = field_of_order(q);
                const auto glf = TableCache::instance().table(oc_f, field);
                for (int e0 : e0s) {
                    std::vector<int> rhos = oc_rho >= 0 ? std::vector<int>{oc_rho} : cuspidal_indices(*glf);
                    std::vector<AffineWeylElem> xs;
                    if (!oc_x.empty()) {
                        xs.push_back(cli::parse_weyl(oc_x, oc_f, e0));
                    } else {
                        for (const auto& x : weyl_representatives(e0, oc_f, oc_bound))
                            if (exponent_spread(x) <= oc_bound) xs.push_back(x);
                    }
                    auto faces = face_filter.empty() ? chamber_faces(oc_f, e0) : std::vector<std::vector<int>>{face_filter};
                    for (int rho : rhos)
                        for (const auto& face : faces) {
                            // Coefficient data is validated up front: a bad tau list is an input error.
                            specs.emplace_back(field, oc_f, e0, rho, face,
                                               tau_override.empty() ? support_taus(field, oc_f, e0, rho, face) : tau_override);
                            for (const auto& x : xs) jobs.push_back({field, e0, specs.size() - 1, face, x});
                        }
                }
            }
            std::vector<OrbitReport> cells(jobs.size());
            parallel_for(jobs.size(), oc_threads, [&](std::size_t i) {
                try {
                    cells[i] = orbit_dimension_check(specs[jobs[i].spec], jobs[i].x);
                } catch (const SizeLimitError&) {
                    throw;
                } catch (const std::exception& e) {
                    cells[i].q = jobs[i].field->q();
                    cells[i].e0 = jobs[i].e0;
                    cells[i].face = jobs[i].face;
                    cells[i].x = jobs[i].x;
                    cells[i].error = e.what();
                }
            });
            Json config;
            config["q"] = qs;
            config["f"] = oc_f;
            config["e0"] = e0s;
            config["bound"] = oc_bound;
            config["face"] = face_filter;
            config["x"] = oc_x;
            config["rho"] = oc_rho;
            config["tau"] = oc_tau;
            Report rep("orbit-check", config);
            for (const auto& c : cells) rep.add(orbit_record(c), c.equal && c.error.empty());
            return rep;
        };
    });

    std::vector<std::string> args(argv + 1, argv + argc);
    try {
        args = cli::expand_config(args, {"char-table", "cuspidals", "lemma-verify", "lemma-sweep", "building", "complex-check",
                                         "orbit-check"});
    } catch (const ArgumentError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }
    std::reverse(args.begin(), args.end());
    try {
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    try {
        Report rep = action();
        if (common.timing)
            rep.set_wall_ms(std::chrono::duration<double, std::milli>(Clock::now() - t0).count());
        const Json j = rep.to_json();
        if (common.output == "-") {
            out << j.dump(2) << '\n';
        } else {
            if (!common.output.empty()) emit_report(j, common.output);
            for (const auto& line : rep.notes()) out << line << '\n';
            out << app.get_subcommands().front()->get_name() << ": cells=" << rep.cells()
                << " passes=" << rep.cells() - rep.failures() << " failures=" << rep.failures() << '\n';
            for (const auto& f : rep.failing_records()) out << "FAIL " << f.dump() << '\n';
        }
        return rep.failures() == 0 ? 0 : 1;
    } catch (const InvariantError& e) {
        err << "check failed: " << e.what() << '\n';
        return 1;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }
}

}  // namespace parahoric
