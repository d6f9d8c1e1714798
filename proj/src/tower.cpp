#include "wittk/tower.hpp"

#include <algorithm>

#include <nlohmann/json.hpp>

namespace wittk {

using nlohmann::json;

Tower Tower::constant(long p, int M, int gens, const Mat& relations) {
    Tower t;
    t.p = p;
    t.precision = M;
    int n = 4 * M;
    for (int k = 0; k < n; ++k) t.stages.push_back({gens, relations});
    for (int k = 0; k + 1 < n; ++k) t.maps.push_back(Mat::identity(gens));
    return t;
}

namespace {

Mat mat_from_json(const json& j) {
    Mat m;
    m.rows = j.size();
    m.cols = m.rows ? j.at(0).size() : 0;
    for (auto& row : j)
        for (auto& v : row) m.a.push_back(BigInt(v.get<long long>()));
    return m;
}

json mat_to_json(const Mat& m) {
    json rows = json::array();
    for (std::size_t i = 0; i < m.rows; ++i) {
        json row = json::array();
        for (std::size_t j2 = 0; j2 < m.cols; ++j2)
            row.push_back(m.at(i, j2).convert_to<long long>());
        rows.push_back(row);
    }
    return rows;
}

// rel_k + p^M Z^g as columns.
Mat stage_denominator(const Tower::Stage& s, const BigInt& pm) {
    if (s.relations.rows == 0)
        return mat_scale(Mat::identity(s.gens), pm);
    return mat_hjoin(s.relations, mat_scale(Mat::identity(s.gens), pm));
}

}  // namespace

json Tower::to_json() const {
    json st = json::array();
    for (auto& s : stages)
        st.push_back(json{{"gens", s.gens}, {"relations", mat_to_json(s.relations)}});
    json mp = json::array();
    for (auto& m : maps) mp.push_back(mat_to_json(m));
    return json{{"p", p}, {"precision", precision}, {"stages", st}, {"maps", mp}};
}

Tower Tower::from_json(const json& j) {
    Tower t;
    t.p = j.at("p").get<long>();
    t.precision = j.at("precision").get<int>();
    for (auto& s : j.at("stages")) {
        Stage stage;
        stage.gens = s.at("gens").get<int>();
        stage.relations = mat_from_json(s.at("relations"));
        if (stage.relations.rows == 0) stage.relations = Mat(stage.gens, 0);
        t.stages.push_back(std::move(stage));
    }
    for (auto& m : j.at("maps")) t.maps.push_back(mat_from_json(m));
    return t;
}

LimResult lim_tower(const Tower& t, int window) {
    if (t.stages.size() < 2) throw DomainError("lim_tower: need at least two stages");
    if (t.maps.size() + 1 != t.stages.size())
        throw DomainError("lim_tower: need exactly one map per consecutive stage pair");
    for (std::size_t k = 0; k < t.maps.size(); ++k)
        if (t.maps[k].rows != static_cast<std::size_t>(t.stages[k].gens) ||
            t.maps[k].cols != static_cast<std::size_t>(t.stages[k + 1].gens))
            throw DomainError("lim_tower: transition matrix dimensions do not compose");

    const int N = window > 0 ? std::min<int>(window, t.stages.size())
                             : std::min<int>(4 * t.precision, t.stages.size());
    const BigInt pm = pow_big(BigInt(t.p), static_cast<unsigned long>(t.precision));

    LimResult res;
    res.window_used = N;

    // Stable images on the front half of the window, where enough depth is
    // available. The chain L_{j,k} = im(stage j+k -> stage j) + rel_j + p^M
    // is a descending lattice chain; certify it by a constant run covering
    // the final quarter of the available depth.
    const int scan = std::max(2, N / 2);
    std::vector<Mat> stable_image(scan);
    std::vector<AbelianPGroup> stable_group(scan);
    for (int j = 0; j < scan; ++j) {
        Mat denom = stage_denominator(t.stages[j], pm);
        Mat composite = Mat::identity(t.stages[j].gens);
        std::vector<Mat> chain;
        chain.push_back(column_hnf(mat_hjoin(composite, denom)));
        for (int k = 1; j + k < N; ++k) {
            composite = mat_mul(composite, t.maps[j + k - 1]);
            chain.push_back(column_hnf(mat_hjoin(composite, denom)));
        }
        int run = 1;  // length of the final constant run
        while (run < static_cast<int>(chain.size()) &&
               chain[chain.size() - 1 - run] == chain.back())
            ++run;
        const int need = std::max(2, static_cast<int>(chain.size()) / 4);
        if (run < need)
            throw StabilizationError("lim_tower: image chain at stage " + std::to_string(j) +
                                     " did not stabilize within the window");
        stable_image[j] = chain.back();
        stable_group[j] = lattice_quotient(stable_image[j], denom, t.p);
    }

    // The stable-image groups must be constant on the back half of the scan.
    const int first_tail = scan / 2;
    for (int j = first_tail; j + 1 < scan; ++j)
        if (!(stable_group[j] == stable_group[j + 1]))
            throw StabilizationError("lim_tower: stable images keep changing at stage " +
                                     std::to_string(j));
    res.stabilized_at = first_tail;
    res.lim = stable_group[scan - 1];

    // lim^1 from the cokernel of (1 - shift) on a short stable segment.
    // Finite stages are Mittag-Leffler, so this comes out trivial; the
    // computation is kept explicit rather than assumed.
    {
        const int segment = std::min(4, scan - first_tail + 1);
        const int base = scan - segment;
        std::vector<int> off_tgt;
        int tgt_gens = 0;
        for (int k = 0; k + 1 < segment; ++k) {
            off_tgt.push_back(tgt_gens);
            tgt_gens += t.stages[base + k].gens;
        }
        if (tgt_gens == 0) {
            res.lim1 = AbelianPGroup::trivial(t.p);
        } else {
            std::size_t dom_cols = 0;
            for (int k = 0; k < segment; ++k) dom_cols += stable_image[base + k].cols;
            Mat d(tgt_gens, dom_cols);
            std::size_t col = 0;
            for (int k = 0; k < segment; ++k) {
                const Mat& gens = stable_image[base + k];
                for (std::size_t c = 0; c < gens.cols; ++c, ++col) {
                    if (k + 1 < segment)
                        for (int r = 0; r < t.stages[base + k].gens; ++r)
                            d.at(off_tgt[k] + r, col) += gens.at(r, c);
                    if (k >= 1) {
                        const Mat& f = t.maps[base + k - 1];
                        for (std::size_t r = 0; r < f.rows; ++r) {
                            BigInt acc = 0;
                            for (std::size_t s2 = 0; s2 < f.cols; ++s2)
                                acc += f.at(r, s2) * gens.at(s2, c);
                            d.at(off_tgt[k - 1] + r, col) -= acc;
                        }
                    }
                }
            }
            Mat l_tgt(tgt_gens, 0), denom_tgt(tgt_gens, 0);
            for (int k = 0; k + 1 < segment; ++k) {
                const Mat& img = stable_image[base + k];
                Mat block(tgt_gens, img.cols);
                for (std::size_t r2 = 0; r2 < img.rows; ++r2)
                    for (std::size_t c2 = 0; c2 < img.cols; ++c2)
                        block.at(off_tgt[k] + r2, c2) = img.at(r2, c2);
                l_tgt = l_tgt.cols ? mat_hjoin(l_tgt, block) : block;
                Mat den_small = stage_denominator(t.stages[base + k], pm);
                Mat den_block(tgt_gens, den_small.cols);
                for (std::size_t r2 = 0; r2 < den_small.rows; ++r2)
                    for (std::size_t c2 = 0; c2 < den_small.cols; ++c2)
                        den_block.at(off_tgt[k] + r2, c2) = den_small.at(r2, c2);
                denom_tgt = denom_tgt.cols ? mat_hjoin(denom_tgt, den_block) : den_block;
            }
            res.lim1 = lattice_quotient(l_tgt, column_hnf(mat_hjoin(d, denom_tgt)), t.p);
        }
        res.notes.push_back("finite stages are Mittag-Leffler; lim1 computed from the cokernel");
    }
    return res;
}

// ---------------------------------------------------------------------------
// theta complexes for perfect fields

json ThetaComplex::to_json() const {
    return json{{"model", model},         {"i", i},
                {"precision", precision}, {"H0", H0.to_json()},
                {"H1", H1.to_json()},     {"H2", H2.to_json()},
                {"zp_at_precision", zp_at_precision}};
}

ThetaComplex theta_infty(long p, int f, int i, int M) {
    if (i < 0 || M < 1 || f < 1) throw DomainError("theta_infty: need i >= 0, M >= 1, f >= 1");
    ThetaComplex th;
    th.model = "GF(" + std::to_string(p) + (f > 1 ? "^" + std::to_string(f) : "") + ")";
    th.i = i;
    th.precision = M;
    th.H0 = AbelianPGroup::trivial(p);
    th.H1 = AbelianPGroup::trivial(p);
    th.H2 = AbelianPGroup::trivial(p);

    if (i == 0) {
        // (d_n)^0 is the unit ideal: the tower vanishes and the fiber is
        // A_inf = W(F_{p^f}) itself in degree zero.
        th.H0 = AbelianPGroup::cyclic(p, M, f);
        th.zp_at_precision = true;
        return th;
    }

    // Tower A_inf/(d_n)^i = W(F_{p^f})/p^{ni} at precision M with the
    // natural reductions (d = p and phi(p) = p on a perfect field).
    Tower t;
    t.p = p;
    t.precision = M;
    const int window = 4 * M;
    for (int n = 1; n <= window; ++n) {
        long long e = std::min<long long>(static_cast<long long>(n) * i, M);
        Tower::Stage s;
        s.gens = f;
        s.relations =
            mat_scale(Mat::identity(f), pow_big(BigInt(t.p), static_cast<unsigned long>(e)));
        t.stages.push_back(std::move(s));
    }
    for (int n = 0; n + 1 < window; ++n) t.maps.push_back(Mat::identity(f));

    LimResult lim = lim_tower(t);
    const BigInt pm = pow_big(BigInt(p), static_cast<unsigned long>(M));

    // H0 = ker(A_inf -> lim): multiples of p^E with E the deepest exponent
    // the window reached; H1 = coker + lim1. Both must vanish at adequate
    // precision but are computed, not asserted.
    long long deepest = std::min<long long>(static_cast<long long>(window) * i, M);
    Mat ker_lattice = mat_scale(Mat::identity(f), pow_big(BigInt(p), static_cast<unsigned long>(deepest)));
    th.H0 = lattice_quotient(mat_hjoin(ker_lattice, mat_scale(Mat::identity(f), pm)),
                             mat_scale(Mat::identity(f), pm), p);

    // alpha hits every stable-stage generator (the stable image is the full
    // stage for the reduction tower), so coker(alpha) = lim/alpha(A_inf):
    AbelianPGroup coker = lattice_quotient(
        Mat::identity(f), mat_hjoin(Mat::identity(f), mat_scale(Mat::identity(f), pm)), p);
    th.H1 = coker;
    th.H1 += lim.lim1;
    if (!(lim.lim == AbelianPGroup::cyclic(p, M, f)))
        throw Error("theta_infty: limit of the d_n-tower is not W(k) at precision");
    return th;
}

json TrGroups::to_json() const {
    json gs = json::array();
    for (auto& [j, g] : groups) {
        bool at_precision = !g.exponents.empty() &&
                            std::all_of(g.exponents.begin(), g.exponents.end(),
                                        [&](int e) { return e == precision; });
        gs.push_back(json{{"j", j}, {"group", g.to_json()}, {"zp_at_precision", at_precision}});
    }
    return json{{"model", model}, {"precision", precision}, {"groups", gs}, {"notes", notes}};
}

TrGroups tr_groups(long p, int f, int degree_bound, int M) {
    if (degree_bound < 0) throw DomainError("tr_groups: degree bound >= 0");
    TrGroups out;
    out.precision = M;
    std::vector<ThetaComplex> theta;
    for (int i = 0; i <= degree_bound / 2 + 1; ++i) theta.push_back(theta_infty(p, f, i, M));
    out.model = theta[0].model;
    for (int j = 0; j <= degree_bound; ++j) {
        if (j % 2 == 0) {
            const int i = j / 2;
            // 0 -> H^2(theta(i+1)) -> TR_{2i} -> H^0(theta(i)) -> 0; one side
            // always vanishes here, so the extension is split.
            AbelianPGroup g = theta[i].H0;
            g += theta[i + 1].H2;
            out.groups.push_back({j, g});
        } else {
            const int i = (j + 1) / 2;
            out.groups.push_back({j, theta[i].H1});
        }
    }
    out.notes.push_back("TR_0 is W(F_q) at precision; higher groups vanish for perfect fields");
    return out;
}

}  // namespace wittk
