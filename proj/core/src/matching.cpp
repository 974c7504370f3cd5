#include "mtqc/matching.hpp"

#include <algorithm>
#include <stdexcept>

namespace mtqc {
namespace {

class BlossomMatcher {
public:
    BlossomMatcher(int n, const std::vector<WeightedEdge>& edges, bool max_cardinality)
        : n_(n), edges_(edges), maxcard_(max_cardinality) {
        const auto ne = edges_.size();
        std::int64_t maxw = 0;
        for (const auto& e : edges_) maxw = std::max(maxw, e.weight);
        endpoint_.resize(2 * ne);
        for (std::size_t p = 0; p < 2 * ne; ++p) endpoint_[p] = p % 2 == 0 ? edges_[p / 2].u : edges_[p / 2].v;
        neighbend_.assign(static_cast<std::size_t>(n_), {});
        for (std::size_t k = 0; k < ne; ++k) {
            neighbend_[static_cast<std::size_t>(edges_[k].u)].push_back(static_cast<int>(2 * k + 1));
            neighbend_[static_cast<std::size_t>(edges_[k].v)].push_back(static_cast<int>(2 * k));
        }
        const auto n2 = static_cast<std::size_t>(2 * n_);
        mate_.assign(static_cast<std::size_t>(n_), -1);
        label_.assign(n2, 0);
        labelend_.assign(n2, -1);
        inblossom_.resize(static_cast<std::size_t>(n_));
        for (int i = 0; i < n_; ++i) inblossom_[static_cast<std::size_t>(i)] = i;
        blossomparent_.assign(n2, -1);
        blossomchilds_.assign(n2, {});
        blossombase_.assign(n2, -1);
        for (int i = 0; i < n_; ++i) blossombase_[static_cast<std::size_t>(i)] = i;
        blossomendps_.assign(n2, {});
        bestedge_.assign(n2, -1);
        blossombestedges_.assign(n2, {});
        has_bestedges_.assign(n2, false);
        for (int b = 2 * n_ - 1; b >= n_; --b) unused_.push_back(b);
        dualvar_.assign(n2, 0);
        for (int i = 0; i < n_; ++i) dualvar_[static_cast<std::size_t>(i)] = maxw;
        allowedge_.assign(ne, false);
    }

    std::vector<int> solve();

private:
    std::int64_t slack(int k) const {
        const auto& e = edges_[static_cast<std::size_t>(k)];
        return dualvar_[static_cast<std::size_t>(e.u)] + dualvar_[static_cast<std::size_t>(e.v)] - 2 * e.weight;
    }

    void leaves(int b, std::vector<int>& out) const {
        if (b < n_) {
            out.push_back(b);
            return;
        }
        for (int t : blossomchilds_[static_cast<std::size_t>(b)]) leaves(t, out);
    }
    std::vector<int> leaves(int b) const {
        std::vector<int> out;
        leaves(b, out);
        return out;
    }

    int& label(int i) { return label_[static_cast<std::size_t>(i)]; }
    int& labelend(int i) { return labelend_[static_cast<std::size_t>(i)]; }
    int& inblossom(int i) { return inblossom_[static_cast<std::size_t>(i)]; }
    int& mate(int i) { return mate_[static_cast<std::size_t>(i)]; }
    int& bestedge(int i) { return bestedge_[static_cast<std::size_t>(i)]; }
    int& base(int i) { return blossombase_[static_cast<std::size_t>(i)]; }
    int& parent(int i) { return blossomparent_[static_cast<std::size_t>(i)]; }
    int ep(int p) const { return endpoint_[static_cast<std::size_t>(p)]; }

    void assign_label(int w, int t, int p);
    int scan_blossom(int v, int w);
    void add_blossom(int base, int k);
    void expand_blossom(int b, bool endstage);
    void augment_blossom(int b, int v);
    void augment_matching(int k);

    int n_;
    const std::vector<WeightedEdge>& edges_;
    bool maxcard_;
    std::vector<int> endpoint_;
    std::vector<std::vector<int>> neighbend_;
    std::vector<int> mate_, label_, labelend_, inblossom_, blossomparent_, blossombase_, bestedge_;
    std::vector<std::vector<int>> blossomchilds_, blossomendps_, blossombestedges_;
    std::vector<bool> has_bestedges_;
    std::vector<int> unused_;
    std::vector<std::int64_t> dualvar_;
    std::vector<bool> allowedge_;
    std::vector<int> queue_;
};

void BlossomMatcher::assign_label(int w, int t, int p) {
    const int b = inblossom(w);
    label(w) = label(b) = t;
    labelend(w) = labelend(b) = p;
    bestedge(w) = bestedge(b) = -1;
    if (t == 1) {
        leaves(b, queue_);
    } else if (t == 2) {
        const int bs = base(b);
        assign_label(ep(mate(bs)), 1, mate(bs) ^ 1);
    }
}

int BlossomMatcher::scan_blossom(int v, int w) {
    std::vector<int> path;
    int found = -1;
    while (v != -1 || w != -1) {
        int b = inblossom(v);
        if (label(b) & 4) {
            found = base(b);
            break;
        }
        path.push_back(b);
        label(b) = 5;
        if (labelend(b) == -1) {
            v = -1;
        } else {
            v = ep(labelend(b));
            b = inblossom(v);
            v = ep(labelend(b));
        }
        if (w != -1) std::swap(v, w);
    }
    for (int b : path) label(b) = 1;
    return found;
}

void BlossomMatcher::add_blossom(int bse, int k) {
    int v = edges_[static_cast<std::size_t>(k)].u;
    int w = edges_[static_cast<std::size_t>(k)].v;
    const int bb = inblossom(bse);
    int bv = inblossom(v);
    int bw = inblossom(w);
    const int b = unused_.back();
    unused_.pop_back();
    base(b) = bse;
    parent(b) = -1;
    parent(bb) = b;
    auto& path = blossomchilds_[static_cast<std::size_t>(b)];
    auto& endps = blossomendps_[static_cast<std::size_t>(b)];
    path.clear();
    endps.clear();
    while (bv != bb) {
        parent(bv) = b;
        path.push_back(bv);
        endps.push_back(labelend(bv));
        v = ep(labelend(bv));
        bv = inblossom(v);
    }
    path.push_back(bb);
    std::reverse(path.begin(), path.end());
    std::reverse(endps.begin(), endps.end());
    endps.push_back(2 * k);
    while (bw != bb) {
        parent(bw) = b;
        path.push_back(bw);
        endps.push_back(labelend(bw) ^ 1);
        w = ep(labelend(bw));
        bw = inblossom(w);
    }
    label(b) = 1;
    labelend(b) = labelend(bb);
    dualvar_[static_cast<std::size_t>(b)] = 0;
    for (int lv : leaves(b)) {
        if (label(inblossom(lv)) == 2) queue_.push_back(lv);
        inblossom(lv) = b;
    }
    std::vector<int> bestedgeto(static_cast<std::size_t>(2 * n_), -1);
    for (int child : path) {
        std::vector<std::vector<int>> nblists;
        if (!has_bestedges_[static_cast<std::size_t>(child)]) {
            for (int lv : leaves(child)) {
                std::vector<int> lst;
                for (int p : neighbend_[static_cast<std::size_t>(lv)]) lst.push_back(p / 2);
                nblists.push_back(std::move(lst));
            }
        } else {
            nblists.push_back(blossombestedges_[static_cast<std::size_t>(child)]);
        }
        for (const auto& lst : nblists) {
            for (int kk : lst) {
                int i = edges_[static_cast<std::size_t>(kk)].u;
                int j = edges_[static_cast<std::size_t>(kk)].v;
                if (inblossom(j) == b) std::swap(i, j);
                const int bj = inblossom(j);
                auto& slot = bestedgeto[static_cast<std::size_t>(bj)];
                if (bj != b && label(bj) == 1 && (slot == -1 || slack(kk) < slack(slot))) slot = kk;
            }
        }
        blossombestedges_[static_cast<std::size_t>(child)].clear();
        has_bestedges_[static_cast<std::size_t>(child)] = false;
        bestedge(child) = -1;
    }
    auto& mine = blossombestedges_[static_cast<std::size_t>(b)];
    mine.clear();
    for (int kk : bestedgeto) if (kk != -1) mine.push_back(kk);
    has_bestedges_[static_cast<std::size_t>(b)] = true;
    bestedge(b) = -1;
    for (int kk : mine) {
        if (bestedge(b) == -1 || slack(kk) < slack(bestedge(b))) bestedge(b) = kk;
    }
}

void BlossomMatcher::expand_blossom(int b, bool endstage) {
    const auto childs = blossomchilds_[static_cast<std::size_t>(b)];
    for (int s : childs) {
        parent(s) = -1;
        if (s < n_) {
            inblossom(s) = s;
        } else if (endstage && dualvar_[static_cast<std::size_t>(s)] == 0) {
            expand_blossom(s, endstage);
        } else {
            for (int lv : leaves(s)) inblossom(lv) = s;
        }
    }
    if (!endstage && label(b) == 2) {
        const auto& endps = blossomendps_[static_cast<std::size_t>(b)];
        const int len = static_cast<int>(childs.size());
        const int entrychild = inblossom(ep(labelend(b) ^ 1));
        int j = static_cast<int>(std::find(childs.begin(), childs.end(), entrychild) - childs.begin());
        int jstep = 0;
        int endptrick = 0;
        if (j & 1) {
            j -= len;
            jstep = 1;
            endptrick = 0;
        } else {
            jstep = -1;
            endptrick = 1;
        }
        auto at = [len](const std::vector<int>& vec, int idx) { return vec[static_cast<std::size_t>(((idx % len) + len) % len)]; };
        int p = labelend(b);
        while (j != 0) {
            label(ep(p ^ 1)) = 0;
            label(ep(at(endps, j - endptrick) ^ endptrick ^ 1)) = 0;
            assign_label(ep(p ^ 1), 2, p);
            allowedge_[static_cast<std::size_t>(at(endps, j - endptrick) / 2)] = true;
            j += jstep;
            p = at(endps, j - endptrick) ^ endptrick;
            allowedge_[static_cast<std::size_t>(p / 2)] = true;
            j += jstep;
        }
        int bv = at(childs, j);
        label(ep(p ^ 1)) = label(bv) = 2;
        labelend(ep(p ^ 1)) = labelend(bv) = p;
        bestedge(bv) = -1;
        j += jstep;
        while (at(childs, j) != entrychild) {
            bv = at(childs, j);
            if (label(bv) == 1) {
                j += jstep;
                continue;
            }
            int found = -1;
            for (int lv : leaves(bv)) {
                if (label(lv) != 0) {
                    found = lv;
                    break;
                }
            }
            if (found != -1) {
                label(found) = 0;
                label(ep(mate(base(bv)))) = 0;
                assign_label(found, 2, labelend(found));
            }
            j += jstep;
        }
    }
    label(b) = labelend(b) = -1;
    blossomchilds_[static_cast<std::size_t>(b)].clear();
    blossomendps_[static_cast<std::size_t>(b)].clear();
    base(b) = -1;
    blossombestedges_[static_cast<std::size_t>(b)].clear();
    has_bestedges_[static_cast<std::size_t>(b)] = false;
    bestedge(b) = -1;
    unused_.push_back(b);
}

void BlossomMatcher::augment_blossom(int b, int v) {
    int t = v;
    while (parent(t) != b) t = parent(t);
    if (t >= n_) augment_blossom(t, v);
    auto& childs = blossomchilds_[static_cast<std::size_t>(b)];
    auto& endps = blossomendps_[static_cast<std::size_t>(b)];
    const int len = static_cast<int>(childs.size());
    auto at = [len](const std::vector<int>& vec, int idx) { return vec[static_cast<std::size_t>(((idx % len) + len) % len)]; };
    const int i = static_cast<int>(std::find(childs.begin(), childs.end(), t) - childs.begin());
    int j = i;
    int jstep = 0;
    int endptrick = 0;
    if (i & 1) {
        j -= len;
        jstep = 1;
        endptrick = 0;
    } else {
        jstep = -1;
        endptrick = 1;
    }
    while (j != 0) {
        j += jstep;
        t = at(childs, j);
        const int p = at(endps, j - endptrick) ^ endptrick;
        if (t >= n_) augment_blossom(t, ep(p));
        j += jstep;
        t = at(childs, j);
        if (t >= n_) augment_blossom(t, ep(p ^ 1));
        mate(ep(p)) = p ^ 1;
        mate(ep(p ^ 1)) = p;
    }
    std::rotate(childs.begin(), childs.begin() + i, childs.end());
    std::rotate(endps.begin(), endps.begin() + i, endps.end());
    base(b) = base(childs.front());
}

void BlossomMatcher::augment_matching(int k) {
    const int v = edges_[static_cast<std::size_t>(k)].u;
    const int w = edges_[static_cast<std::size_t>(k)].v;
    for (auto [s, p] : {std::pair{v, 2 * k + 1}, std::pair{w, 2 * k}}) {
        while (true) {
            const int bs = inblossom(s);
            if (bs >= n_) augment_blossom(bs, s);
            mate(s) = p;
            if (labelend(bs) == -1) break;
            const int t = ep(labelend(bs));
            const int bt = inblossom(t);
            s = ep(labelend(bt));
            const int j = ep(labelend(bt) ^ 1);
            if (bt >= n_) augment_blossom(bt, j);
            mate(j) = labelend(bt);
            p = labelend(bt) ^ 1;
        }
    }
}

std::vector<int> BlossomMatcher::solve() {
    const auto n2 = static_cast<std::size_t>(2 * n_);
    for (int stage = 0; stage < n_; ++stage) {
        std::fill(label_.begin(), label_.end(), 0);
        std::fill(bestedge_.begin(), bestedge_.end(), -1);
        for (std::size_t b = static_cast<std::size_t>(n_); b < n2; ++b) {
            blossombestedges_[b].clear();
            has_bestedges_[b] = false;
        }
        std::fill(allowedge_.begin(), allowedge_.end(), false);
        queue_.clear();
        for (int v = 0; v < n_; ++v) {
            if (mate(v) == -1 && label(inblossom(v)) == 0) assign_label(v, 1, -1);
        }
        bool augmented = false;
        while (true) {
            while (!queue_.empty() && !augmented) {
                const int v = queue_.back();
                queue_.pop_back();
                for (int p : neighbend_[static_cast<std::size_t>(v)]) {
                    const int k = p / 2;
                    const int w = ep(p);
                    if (inblossom(v) == inblossom(w)) continue;
                    std::int64_t kslack = 0;
                    if (!allowedge_[static_cast<std::size_t>(k)]) {
                        kslack = slack(k);
                        if (kslack <= 0) allowedge_[static_cast<std::size_t>(k)] = true;
                    }
                    if (allowedge_[static_cast<std::size_t>(k)]) {
                        if (label(inblossom(w)) == 0) {
                            assign_label(w, 2, p ^ 1);
                        } else if (label(inblossom(w)) == 1) {
                            const int bse = scan_blossom(v, w);
                            if (bse >= 0) {
                                add_blossom(bse, k);
                            } else {
                                augment_matching(k);
                                augmented = true;
                                break;
                            }
                        } else if (label(w) == 0) {
                            label(w) = 2;
                            labelend(w) = p ^ 1;
                        }
                    } else if (label(inblossom(w)) == 1) {
                        const int b = inblossom(v);
                        if (bestedge(b) == -1 || kslack < slack(bestedge(b))) bestedge(b) = k;
                    } else if (label(w) == 0) {
                        if (bestedge(w) == -1 || kslack < slack(bestedge(w))) bestedge(w) = k;
                    }
                }
            }
            if (augmented) break;

            int deltatype = -1;
            std::int64_t delta = 0;
            int deltaedge = -1;
            int deltablossom = -1;
            if (!maxcard_) {
                deltatype = 1;
                delta = *std::min_element(dualvar_.begin(), dualvar_.begin() + n_);
            }
            for (int v = 0; v < n_; ++v) {
                if (label(inblossom(v)) == 0 && bestedge(v) != -1) {
                    const std::int64_t d = slack(bestedge(v));
                    if (deltatype == -1 || d < delta) {
                        delta = d;
                        deltatype = 2;
                        deltaedge = bestedge(v);
                    }
                }
            }
            for (int b = 0; b < 2 * n_; ++b) {
                if (parent(b) == -1 && label(b) == 1 && bestedge(b) != -1) {
                    const std::int64_t d = slack(bestedge(b)) / 2;
                    if (deltatype == -1 || d < delta) {
                        delta = d;
                        deltatype = 3;
                        deltaedge = bestedge(b);
                    }
                }
            }
            for (int b = n_; b < 2 * n_; ++b) {
                if (base(b) >= 0 && parent(b) == -1 && label(b) == 2 &&
                    (deltatype == -1 || dualvar_[static_cast<std::size_t>(b)] < delta)) {
                    delta = dualvar_[static_cast<std::size_t>(b)];
                    deltatype = 4;
                    deltablossom = b;
                }
            }
            if (deltatype == -1) {
                deltatype = 1;
                delta = std::max<std::int64_t>(0, *std::min_element(dualvar_.begin(), dualvar_.begin() + n_));
            }
            for (int v = 0; v < n_; ++v) {
                const int l = label(inblossom(v));
                if (l == 1) dualvar_[static_cast<std::size_t>(v)] -= delta;
                else if (l == 2) dualvar_[static_cast<std::size_t>(v)] += delta;
            }
            for (int b = n_; b < 2 * n_; ++b) {
                if (base(b) >= 0 && parent(b) == -1) {
                    if (label(b) == 1) dualvar_[static_cast<std::size_t>(b)] += delta;
                    else if (label(b) == 2) dualvar_[static_cast<std::size_t>(b)] -= delta;
                }
            }
            if (deltatype == 1) {
                break;
            } else if (deltatype == 2) {
                allowedge_[static_cast<std::size_t>(deltaedge)] = true;
                int i = edges_[static_cast<std::size_t>(deltaedge)].u;
                const int j = edges_[static_cast<std::size_t>(deltaedge)].v;
                if (label(inblossom(i)) == 0) i = j;
                queue_.push_back(i);
            } else if (deltatype == 3) {
                allowedge_[static_cast<std::size_t>(deltaedge)] = true;
                queue_.push_back(edges_[static_cast<std::size_t>(deltaedge)].u);
            } else {
                expand_blossom(deltablossom, false);
            }
        }
        if (!augmented) break;
        for (int b = n_; b < 2 * n_; ++b) {
            if (parent(b) == -1 && base(b) >= 0 && label(b) == 1 && dualvar_[static_cast<std::size_t>(b)] == 0) {
                expand_blossom(b, true);
            }
        }
    }
    std::vector<int> out(static_cast<std::size_t>(n_), -1);
    for (int v = 0; v < n_; ++v) {
        if (mate(v) >= 0) out[static_cast<std::size_t>(v)] = ep(mate(v));
    }
    return out;
}

}  // namespace

std::vector<int> max_weight_matching(int vertex_count, const std::vector<WeightedEdge>& edges,
                                     bool max_cardinality) {
    if (vertex_count <= 0) return {};
    for (const auto& e : edges) {
        if (e.u < 0 || e.v < 0 || e.u >= vertex_count || e.v >= vertex_count || e.u == e.v) {
            throw std::invalid_argument("matching edge references an invalid vertex");
        }
    }
    if (edges.empty()) return std::vector<int>(static_cast<std::size_t>(vertex_count), -1);
    // Doubling keeps every dual update integral (slack/2 in the blossom step).
    std::vector<WeightedEdge> doubled = edges;
    for (auto& e : doubled) e.weight *= 2;
    BlossomMatcher m(vertex_count, doubled, max_cardinality);
    return m.solve();
}

std::vector<int> min_weight_perfect_matching(int vertex_count, const std::vector<WeightedEdge>& edges) {
    std::int64_t max_cost = 0;
    for (const auto& e : edges) max_cost = std::max(max_cost, e.weight);
    std::vector<WeightedEdge> flipped = edges;
    for (auto& e : flipped) e.weight = max_cost + 1 - e.weight;
    auto mate = max_weight_matching(vertex_count, flipped, true);
    for (int m : mate) {
        if (m < 0) throw std::runtime_error("graph admits no perfect matching");
    }
    return mate;
}

}  // namespace mtqc
