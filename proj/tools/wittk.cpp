#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "wittk/decomp.hpp"
#include "wittk/kgroups.hpp"
#include "wittk/selfcheck.hpp"
#include "wittk/tower.hpp"
#include "wittk/witt.hpp"

using nlohmann::json;
using namespace wittk;

namespace {

json bigint_json(const BigInt& v) {
    if (v <= BigInt((1ll << 53)) && v >= BigInt(-(1ll << 53)))
        return json(v.convert_to<std::int64_t>());
    return json(v.str());
}

RingDescriptor parse_ring(const std::string& spec) {
    return RingDescriptor::from_json(json::parse(spec));
}

// "GF(4)", "GF(2,2)", "GF(2^2)", "F3"
RingDescriptor parse_field(std::string s) {
    auto fail = [&] { throw DomainError("cannot parse field: " + s); };
    long p = 0;
    int f = 1;
    if (s.rfind("GF(", 0) == 0 && s.back() == ')') {
        std::string body = s.substr(3, s.size() - 4);
        auto sep = body.find_first_of(",^");
        if (sep == std::string::npos) {
            long q = std::stol(body);
            // factor the prime power
            for (long c = 2; c <= q; ++c) {
                if (q % c) continue;
                p = c;
                long t = q;
                while (t % c == 0) {
                    t /= c;
                    ++f;
                }
                --f;
                if (t != 1) fail();
                break;
            }
        } else {
            p = std::stol(body.substr(0, sep));
            f = std::stoi(body.substr(sep + 1));
        }
    } else if (s.rfind("F", 0) == 0) {
        long q = std::stol(s.substr(s[1] == '_' ? 2 : 1));
        return parse_field("GF(" + std::to_string(q) + ")");
    } else {
        fail();
    }
    if (f == 1) return RingDescriptor::prime_field(p);
    return RingDescriptor::finite_field(p, f);
}

TruncationSet parse_trunc(const std::string& s) {
    if (s.rfind("full:", 0) == 0) return TruncationSet::full(std::stoi(s.substr(5)));
    if (s.rfind("ptyp:", 0) == 0) {
        auto rest = s.substr(5);
        auto sep = rest.find(':');
        if (sep == std::string::npos) throw DomainError("ptyp needs ptyp:p:length");
        return TruncationSet::p_typical(std::stol(rest.substr(0, sep)),
                                        std::stoi(rest.substr(sep + 1)));
    }
    return TruncationSet::from_indices(json::parse(s).get<std::vector<int>>());
}

WittVector parse_witt(const RingDescriptor& ring, const TruncationSet& t, const std::string& s) {
    json j = json::parse(s);
    WittVector w = witt_zero(t, ring);
    if (j.is_array()) {
        if (j.size() != t.size()) throw DomainError("coefficient count != truncation size");
        for (size_t i = 0; i < t.size(); ++i)
            w.coeffs[i] = RingElement::from_json(ring, j.at(i));
    } else {
        for (auto& [key, val] : j.items())
            w.coeffs[t.position(std::stoi(key))] = RingElement::from_json(ring, val);
    }
    return w;
}

std::string csv_quote(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::string value_string(const json& v) {
    if (v.is_string()) return v.get<std::string>();
    return v.dump();
}

// generic renderers: rows of (key, value) or a rectangular table
void emit_kv(const json& doc, const std::string& format, std::ostream& os) {
    if (format == "json") {
        os << doc.dump(2) << "\n";
        return;
    }
    std::vector<std::pair<std::string, std::string>> rows;
    std::function<void(const std::string&, const json&)> flat = [&](const std::string& prefix,
                                                                    const json& v) {
        if (v.is_object()) {
            for (auto& [k, val] : v.items()) flat(prefix.empty() ? k : prefix + "." + k, val);
        } else if (v.is_array()) {
            int i = 0;
            for (auto& val : v) flat(prefix + "[" + std::to_string(i++) + "]", val);
        } else {
            rows.push_back({prefix, value_string(v)});
        }
    };
    flat("", doc);
    if (format == "csv") {
        os << "key,value\n";
        for (auto& [k, v] : rows) os << csv_quote(k) << "," << csv_quote(v) << "\n";
    } else {
        os << "| key | value |\n|---|---|\n";
        for (auto& [k, v] : rows) os << "| " << k << " | " << v << " |\n";
    }
}

struct Emitter {
    std::string format = "json";
    void kv(const json& doc) const { emit_kv(doc, format, std::cout); }
};

int run_witt(const std::string& op, const std::string& ring_s, const std::string& trunc_s,
             const std::string& a_s, const std::string& b_s, int n, const std::string& target_s,
             const Emitter& em) {
    RingDescriptor ring = parse_ring(ring_s);
    TruncationSet t = parse_trunc(trunc_s);
    WittVector a = parse_witt(ring, t, a_s);
    if (op == "ghost") {
        em.kv(ghost(a).to_json());
        return 0;
    }
    if (op == "add" || op == "mul") {
        if (b_s.empty()) throw DomainError("--b required for add/mul");
        WittVector b = parse_witt(ring, t, b_s);
        em.kv((op == "add" ? witt_add(a, b) : witt_mul(a, b)).to_json());
        return 0;
    }
    if (op == "neg") {
        em.kv(witt_neg(a).to_json());
        return 0;
    }
    if (op == "V") {
        TruncationSet target = target_s.empty() ? t : parse_trunc(target_s);
        em.kv(verschiebung(n, a, target).to_json());
        return 0;
    }
    if (op == "F") {
        em.kv(frobenius(n, a).to_json());
        return 0;
    }
    throw DomainError("unknown witt op: " + op);
}

json decomp_report_json(const DecompositionReport& r) {
    json comps = json::array();
    for (auto& c : r.components)
        comps.push_back(json{{"u", c.u}, {"length", c.length}, {"vector", c.vector.to_json()}});
    return json{{"p", r.p}, {"m", r.m}, {"components", comps}};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact K-theory of truncated polynomial algebras via Witt vectors"};
    app.require_subcommand(1);
    Emitter em;
    app.add_option("--format", em.format, "Output format")
        ->check(CLI::IsMember({"json", "csv", "markdown"}))
        ->capture_default_str();

    // witt
    auto* witt_cmd = app.add_subcommand("witt", "Witt vector arithmetic");
    std::string w_op, w_ring = R"({"ring":"Z"})", w_trunc = "full:4", w_a, w_b, w_target;
    int w_n = 1;
    witt_cmd->add_option("--op", w_op, "add|mul|neg|V|F|ghost")->required();
    witt_cmd->add_option("--ring", w_ring, "coefficient ring, JSON");
    witt_cmd->add_option("--trunc", w_trunc, "full:m | ptyp:p:L | JSON index list");
    witt_cmd->add_option("--a", w_a, "coefficients, JSON array or {index: value}")->required();
    witt_cmd->add_option("--b", w_b, "second operand for add/mul");
    witt_cmd->add_option("--n", w_n, "index for V/F");
    witt_cmd->add_option("--target", w_target, "target truncation for V");

    // decomp
    auto* decomp_cmd = app.add_subcommand("decomp", "p-typical decomposition");
    long d_p = 2;
    int d_m = 4;
    std::string d_ring = R"({"ring":"Zmod","m":2})", d_a;
    decomp_cmd->add_option("--p", d_p, "prime")->required();
    decomp_cmd->add_option("--m", d_m, "big truncation length")->required();
    decomp_cmd->add_option("--ring", d_ring, "coefficient ring, JSON");
    decomp_cmd->add_option("--a", d_a, "coefficients")->required();

    // kgroup
    auto* kgroup_cmd = app.add_subcommand("kgroup", "relative K-groups");
    kgroup_cmd->require_subcommand(1);
    auto* kp = kgroup_cmd->add_subcommand("perfectoid", "K_{2r-1}(R[x]/x^e,(x)) for R = F_{p^f}");
    long kp_p = 2;
    int kp_e = 2, kp_r = 1;
    std::string kp_field = "GF(2)";
    kp->add_option("--p", kp_p)->required();
    kp->add_option("--e", kp_e)->required();
    kp->add_option("--r", kp_r)->required();
    kp->add_option("--field", kp_field)->required();

    auto* kc = kgroup_cmd->add_subcommand("cdvr", "K-groups over a CDVR");
    long kc_p = 2, kc_dE = -1;
    int kc_f = 1, kc_e = 1, kc_n = 2, kc_i = 1;
    std::string kc_eisenstein;
    kc->add_option("--p", kc_p)->required();
    kc->add_option("--f", kc_f);
    kc->add_option("--e", kc_e);
    kc->add_option("--dE", kc_dE);
    kc->add_option("--eisenstein", kc_eisenstein, "comma-separated coefficients, ascending");
    kc->add_option("--n", kc_n)->required();
    kc->add_option("--i", kc_i)->required();

    auto* ki = kgroup_cmd->add_subcommand("integral", "K_{2i} order and K_{2i+1} rank over Z");
    int ki_n = 2, ki_i = 1, ki_degree = 1;
    std::vector<std::string> ki_locals;
    ki->add_option("--n", ki_n)->required();
    ki->add_option("--i", ki_i)->required();
    ki->add_option("--degree", ki_degree, "[K:Q] for number-ring input");
    ki->add_option("--local", ki_locals, "per-prime completion p:f:e:dE (repeatable)");

    // table agh
    auto* table_cmd = app.add_subcommand("table", "tables");
    table_cmd->require_subcommand(1);
    auto* ta = table_cmd->add_subcommand("agh", "orders (ni)!(i!)^{n-2} and ranks n-1");
    int ta_nmax = 6, ta_imax = 6;
    ta->add_option("--n-max", ta_nmax);
    ta->add_option("--i-max", ta_imax);

    // tr
    auto* tr_cmd = app.add_subcommand("tr", "TR of a perfect field at finite precision");
    std::string tr_field = "GF(2)";
    int tr_bound = 10, tr_precision = 8;
    tr_cmd->add_option("--field", tr_field)->required();
    tr_cmd->add_option("--degree-bound", tr_bound);
    tr_cmd->add_option("--precision", tr_precision);

    // selfcheck
    auto* sc_cmd = app.add_subcommand("selfcheck", "run the oracle suites");
    std::string sc_suite = "all";
    std::uint64_t sc_seed = 7;
    bool sc_serial = false;
    sc_cmd->add_option("--suite", sc_suite, "ghost|decomp|tworoute|cdvr|tr|all");
    sc_cmd->add_option("--seed", sc_seed);
    sc_cmd->add_flag("--serial", sc_serial, "force the serial reference kernels");

    // global flags remain visible after a subcommand name
    std::function<void(CLI::App*)> allow_fallthrough = [&](CLI::App* a) {
        a->fallthrough();
        for (auto* sub : a->get_subcommands({})) allow_fallthrough(sub);
    };
    allow_fallthrough(&app);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*witt_cmd) return run_witt(w_op, w_ring, w_trunc, w_a, w_b, w_n, w_target, em);
        if (*decomp_cmd) {
            RingDescriptor ring = parse_ring(d_ring);
            WittVector a = parse_witt(ring, TruncationSet::full(d_m), d_a);
            em.kv(decomp_report_json(decompose(a, d_p)));
            return 0;
        }
        if (*kp) {
            KGroupResult res = k_odd_perfectoid(kp_p, kp_e, kp_r, parse_field(kp_field));
            em.kv(res.to_json());
            return 0;
        }
        if (*kc) {
            CdvrData data;
            if (!kc_eisenstein.empty()) {
                std::vector<BigInt> coeffs;
                std::stringstream ss(kc_eisenstein);
                std::string tok;
                while (std::getline(ss, tok, ',')) {
                    tok.erase(0, tok.find_first_not_of(" \t"));
                    tok.erase(tok.find_last_not_of(" \t") + 1);
                    if (tok.empty()) throw DomainError("empty coefficient in --eisenstein");
                    coeffs.push_back(BigInt(tok));
                }
                data = cdvr_from_polynomial(kc_p, kc_f, coeffs);
            } else {
                if (kc_dE < 0) throw DomainError("provide --dE or --eisenstein");
                data = CdvrData{kc_p, kc_f, kc_e, kc_dE, false};
            }
            auto [odd, even] = cdvr_k_groups(data, kc_n, kc_i);
            em.kv(json{{"data", data.to_json()},
                       {"n", kc_n},
                       {"i", kc_i},
                       {"odd", odd.to_json()},
                       {"even", even.to_json()}});
            return 0;
        }
        if (*ki) {
            IntegralAgh res;
            if (ki_locals.empty()) {
                res = integral_agh(ki_n, ki_i);
            } else {
                std::vector<LocalPrimeData> locals;
                for (auto& s : ki_locals) {
                    LocalPrimeData l{};
                    if (std::sscanf(s.c_str(), "%ld:%d:%d:%ld", &l.p, &l.f, &l.e, &l.dE) != 4)
                        throw DomainError("--local expects p:f:e:dE");
                    locals.push_back(l);
                }
                res = integral_agh(ki_n, ki_i, ki_degree, locals);
            }
            em.kv(json{{"order", bigint_json(res.order)}, {"rank", res.rank}});
            return 0;
        }
        if (*ta) {
            if (em.format == "markdown") {
                std::cout << "| n \\ i |";
                for (int i = 0; i <= ta_imax; ++i) std::cout << " " << i << " |";
                std::cout << "\n|---|";
                for (int i = 0; i <= ta_imax; ++i) std::cout << "---|";
                std::cout << "\n";
                for (int n = 1; n <= ta_nmax; ++n) {
                    std::cout << "| " << n << " |";
                    for (int i = 0; i <= ta_imax; ++i) {
                        IntegralAgh cell = integral_agh(n, i);
                        std::cout << " " << cell.order.str() << " / " << cell.rank << " |";
                    }
                    std::cout << "\n";
                }
            } else if (em.format == "csv") {
                std::cout << "n,i,order,rank\n";
                for (int n = 1; n <= ta_nmax; ++n)
                    for (int i = 0; i <= ta_imax; ++i) {
                        IntegralAgh cell = integral_agh(n, i);
                        std::cout << n << "," << i << "," << cell.order.str() << "," << cell.rank
                                  << "\n";
                    }
            } else {
                json rows = json::array();
                for (int n = 1; n <= ta_nmax; ++n)
                    for (int i = 0; i <= ta_imax; ++i) {
                        IntegralAgh cell = integral_agh(n, i);
                        rows.push_back(json{{"n", n},
                                            {"i", i},
                                            {"order", bigint_json(cell.order)},
                                            {"rank", cell.rank}});
                    }
                std::cout << json{{"table", "agh"}, {"cells", rows}}.dump(2) << "\n";
            }
            return 0;
        }
        if (*tr_cmd) {
            RingDescriptor field = parse_field(tr_field);
            long p = field.char_p();
            int f = field.kind() == RingKind::FiniteField ? field.ff_f() : 1;
            TrGroups res = tr_groups(p, f, tr_bound, tr_precision);
            if (em.format == "csv") {
                std::cout << "j,group,zp_at_precision\n";
                for (auto& [j, g] : res.groups)
                    std::cout << j << "," << csv_quote(g.to_string()) << ","
                              << (g.exponents.size() && g.exponents[0] == tr_precision ? "true"
                                                                                       : "false")
                              << "\n";
            } else if (em.format == "markdown") {
                std::cout << "| j | TR_j |\n|---|---|\n";
                for (auto& [j, g] : res.groups)
                    std::cout << "| " << j << " | " << g.to_string() << " |\n";
            } else {
                std::cout << res.to_json().dump(2) << "\n";
            }
            return 0;
        }
        if (*sc_cmd) {
            SelfcheckReport rep =
                run_selfcheck({sc_suite}, sc_seed, sc_serial ? Exec::Serial : Exec::Parallel);
            em.kv(rep.to_json());
            return rep.pass ? 0 : 4;
        }
    } catch (const CapExceeded& e) {
        std::cerr << json{{"error", e.what()}, {"kind", "cap_exceeded"}}.dump() << "\n";
        return 3;
    } catch (const DomainError& e) {
        std::cerr << json{{"error", e.what()}, {"kind", "invalid_parameters"}}.dump() << "\n";
        return 2;
    } catch (const DescriptorMismatch& e) {
        std::cerr << json{{"error", e.what()}, {"kind", "invalid_parameters"}}.dump() << "\n";
        return 2;
    } catch (const json::exception& e) {
        std::cerr << json{{"error", e.what()}, {"kind", "invalid_parameters"}}.dump() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << json{{"error", e.what()}, {"kind", "internal"}}.dump() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << json{{"error", e.what()}, {"kind", "invalid_parameters"}}.dump() << "\n";
        return 2;
    }
    return 0;
}
