#include "roughflow/aromatic.hpp"

#include <algorithm>
#include <numeric>

#include "roughflow/errors.hpp"

namespace roughflow {

namespace {

struct Component {
    bool rooted = false;
    DecoratedTree tree;                          // rooted case
    std::vector<Letter> cycle_dec;               // aroma: stations in edge order
    std::vector<std::vector<DecoratedTree>> cycle_pendants;
    std::string canon;
};

DecoratedTree build_tree(int v, const std::vector<Letter>& dec,
                         const std::vector<std::vector<int>>& in) {
    std::vector<DecoratedTree> children;
    children.reserve(in[static_cast<std::size_t>(v)].size());
    for (int w : in[static_cast<std::size_t>(v)]) children.push_back(build_tree(w, dec, in));
    return DecoratedTree(dec[static_cast<std::size_t>(v)], std::move(children));
}

std::string station_canon(Letter dec, const std::vector<DecoratedTree>& pendants) {
    // A cycle station with its pendants has the shape of a tree node.
    return DecoratedTree(dec, pendants).canon();
}

} // namespace

AromaticForest AromaticForest::from_graph(std::vector<Letter> dec, std::vector<int> out) {
    const int n = static_cast<int>(dec.size());
    if (out.size() != dec.size()) throw domain_error("decoration/edge list size mismatch");
    for (int v = 0; v < n; ++v)
        if (out[static_cast<std::size_t>(v)] < -1 || out[static_cast<std::size_t>(v)] >= n)
            throw domain_error("out-edge target out of range");

    AromaticForest f;
    if (n == 0) return f;

    // Cycle vertices of the functional graph (standard three-state walk).
    std::vector<char> on_cycle(static_cast<std::size_t>(n), 0);
    {
        std::vector<int> state(static_cast<std::size_t>(n), 0); // 0 unseen, 1 on path, 2 done
        for (int s = 0; s < n; ++s) {
            if (state[static_cast<std::size_t>(s)]) continue;
            std::vector<int> path;
            int v = s;
            while (v >= 0 && state[static_cast<std::size_t>(v)] == 0) {
                state[static_cast<std::size_t>(v)] = 1;
                path.push_back(v);
                v = out[static_cast<std::size_t>(v)];
            }
            if (v >= 0 && state[static_cast<std::size_t>(v)] == 1)
                for (auto it = std::find(path.begin(), path.end(), v); it != path.end(); ++it)
                    on_cycle[static_cast<std::size_t>(*it)] = 1;
            for (int u : path) state[static_cast<std::size_t>(u)] = 2;
        }
    }

    // In-neighbor lists restricted to tree (non-cycle) vertices; the cycle
    // structure itself is recovered by following out-edges.
    std::vector<std::vector<int>> in(static_cast<std::size_t>(n));
    for (int v = 0; v < n; ++v) {
        int t = out[static_cast<std::size_t>(v)];
        if (t >= 0 && !on_cycle[static_cast<std::size_t>(v)])
            in[static_cast<std::size_t>(t)].push_back(v);
    }
    for (auto& lst : in)
        std::sort(lst.begin(), lst.end(), [&](int a, int b) {
            return build_tree(a, dec, in).canon() < build_tree(b, dec, in).canon();
        });

    // Weakly connected components.
    std::vector<int> comp(static_cast<std::size_t>(n), -1);
    std::vector<std::vector<int>> undirected(static_cast<std::size_t>(n));
    for (int v = 0; v < n; ++v)
        if (int t = out[static_cast<std::size_t>(v)]; t >= 0) {
            undirected[static_cast<std::size_t>(v)].push_back(t);
            undirected[static_cast<std::size_t>(t)].push_back(v);
        }
    int ncomp = 0;
    for (int seed = 0; seed < n; ++seed) {
        if (comp[static_cast<std::size_t>(seed)] >= 0) continue;
        std::vector<int> stack{seed};
        comp[static_cast<std::size_t>(seed)] = ncomp;
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            for (int w : undirected[static_cast<std::size_t>(v)])
                if (comp[static_cast<std::size_t>(w)] < 0) {
                    comp[static_cast<std::size_t>(w)] = ncomp;
                    stack.push_back(w);
                }
        }
        ++ncomp;
    }

    std::vector<Component> comps(static_cast<std::size_t>(ncomp));
    for (int c = 0; c < ncomp; ++c) {
        std::vector<int> verts;
        for (int v = 0; v < n; ++v)
            if (comp[static_cast<std::size_t>(v)] == c) verts.push_back(v);
        int root = -1;
        for (int v : verts)
            if (out[static_cast<std::size_t>(v)] < 0) {
                if (root >= 0) throw domain_error("disconnected root pair inside a component");
                root = v;
            }
        Component& comp_out = comps[static_cast<std::size_t>(c)];
        if (root >= 0) {
            comp_out.rooted = true;
            comp_out.tree = build_tree(root, dec, in);
            comp_out.canon = "T" + comp_out.tree.canon();
            continue;
        }
        // Rootless component: locate its cycle by walking out-edges.
        int v = verts.front();
        while (!on_cycle[static_cast<std::size_t>(v)]) v = out[static_cast<std::size_t>(v)];
        std::vector<int> cycle{v};
        for (int u = out[static_cast<std::size_t>(v)]; u != v; u = out[static_cast<std::size_t>(u)])
            cycle.push_back(u);

        const std::size_t k = cycle.size();
        std::vector<std::string> station(k);
        std::vector<std::vector<DecoratedTree>> pendants(k);
        for (std::size_t i = 0; i < k; ++i) {
            int u = cycle[i];
            for (int w : in[static_cast<std::size_t>(u)])
                if (!on_cycle[static_cast<std::size_t>(w)])
                    pendants[i].push_back(build_tree(w, dec, in));
            std::sort(pendants[i].begin(), pendants[i].end(),
                      [](const DecoratedTree& x, const DecoratedTree& y) {
                          return x.canon() < y.canon();
                      });
            station[i] = station_canon(dec[static_cast<std::size_t>(u)], pendants[i]);
        }
        // Lexicographically minimal rotation in cycle-edge order.
        std::size_t best = 0;
        std::string best_str;
        for (std::size_t r = 0; r < k; ++r) {
            std::string s;
            for (std::size_t i = 0; i < k; ++i) s += station[(r + i) % k] + "|";
            if (r == 0 || s < best_str) {
                best_str = s;
                best = r;
            }
        }
        comp_out.cycle_dec.resize(k);
        comp_out.cycle_pendants.resize(k);
        for (std::size_t i = 0; i < k; ++i) {
            comp_out.cycle_dec[i] = dec[static_cast<std::size_t>(cycle[(best + i) % k])];
            comp_out.cycle_pendants[i] = pendants[(best + i) % k];
        }
        comp_out.canon = "C" + best_str;
    }

    std::sort(comps.begin(), comps.end(),
              [](const Component& a, const Component& b) { return a.canon < b.canon; });

    // Rebuild the flat graph in canonical order.
    f.dec_.reserve(static_cast<std::size_t>(n));
    f.out_.reserve(static_cast<std::size_t>(n));
    auto emit_tree = [&](auto&& self, const DecoratedTree& t, int parent) -> void {
        int idx = static_cast<int>(f.dec_.size());
        f.dec_.push_back(t.decoration());
        f.out_.push_back(parent);
        for (const auto& ch : t.children()) self(self, ch, idx);
    };
    for (const auto& cmp : comps) {
        if (cmp.rooted) {
            emit_tree(emit_tree, cmp.tree, -1);
            continue;
        }
        const std::size_t k = cmp.cycle_dec.size();
        const int base = static_cast<int>(f.dec_.size());
        for (std::size_t i = 0; i < k; ++i) {
            f.dec_.push_back(cmp.cycle_dec[i]);
            f.out_.push_back(base + static_cast<int>((i + 1) % k));
        }
        for (std::size_t i = 0; i < k; ++i)
            for (const auto& p : cmp.cycle_pendants[i])
                emit_tree(emit_tree, p, base + static_cast<int>(i));
    }
    for (std::size_t i = 0; i < comps.size(); ++i) {
        if (i) f.canon_ += '/';
        f.canon_ += comps[i].canon;
    }
    return f;
}

AromaticForest AromaticForest::from_tree(const DecoratedTree& t) {
    if (t.is_unit()) return unit();
    std::vector<Letter> dec;
    std::vector<int> out;
    auto emit = [&](auto&& self, const DecoratedTree& node, int parent) -> void {
        int idx = static_cast<int>(dec.size());
        dec.push_back(node.decoration());
        out.push_back(parent);
        for (const auto& ch : node.children()) self(self, ch, idx);
    };
    emit(emit, t, -1);
    return from_graph(std::move(dec), std::move(out));
}

AromaticForest AromaticForest::from_forest(const Forest& f) {
    std::vector<Letter> dec;
    std::vector<int> out;
    for (const auto& t : f.trees()) {
        auto emit = [&](auto&& self, const DecoratedTree& node, int parent) -> void {
            int idx = static_cast<int>(dec.size());
            dec.push_back(node.decoration());
            out.push_back(parent);
            for (const auto& ch : node.children()) self(self, ch, idx);
        };
        emit(emit, t, -1);
    }
    return from_graph(std::move(dec), std::move(out));
}

AromaticForest AromaticForest::aroma(
    const std::vector<std::pair<Letter, std::vector<DecoratedTree>>>& cycle) {
    if (cycle.empty()) throw domain_error("aroma needs at least one cycle vertex");
    std::vector<Letter> dec;
    std::vector<int> out;
    const int k = static_cast<int>(cycle.size());
    for (int i = 0; i < k; ++i) {
        dec.push_back(cycle[static_cast<std::size_t>(i)].first);
        out.push_back((i + 1) % k);
    }
    for (int i = 0; i < k; ++i) {
        for (const auto& p : cycle[static_cast<std::size_t>(i)].second) {
            auto emit = [&](auto&& self, const DecoratedTree& node, int parent) -> void {
                int idx = static_cast<int>(dec.size());
                dec.push_back(node.decoration());
                out.push_back(parent);
                for (const auto& ch : node.children()) self(self, ch, idx);
            };
            emit(emit, p, i);
        }
    }
    return from_graph(std::move(dec), std::move(out));
}

int AromaticForest::root_count() const {
    int r = 0;
    for (int o : out_)
        if (o < 0) ++r;
    return r;
}

std::string AromaticForest::encode(const Signature& sig) const {
    if (is_unit()) return "1";
    std::string s = "{";
    for (std::size_t v = 0; v < dec_.size(); ++v) {
        if (v) s += ',';
        s += std::to_string(v);
        s += ':';
        s += sig.at(dec_[v]);
    }
    bool any_edge = false;
    for (std::size_t v = 0; v < out_.size(); ++v) {
        if (out_[v] < 0) continue;
        s += any_edge ? "," : ";";
        any_edge = true;
        s += std::to_string(v);
        s += "->";
        s += std::to_string(out_[v]);
    }
    s += '}';
    return s;
}

AromaticForest AromaticForest::parse(const Signature& sig, const std::string& text) {
    if (text == "1" || text == "{}") return unit();
    if (text.size() < 2 || text.front() != '{' || text.back() != '}')
        throw parse_error("aromatic literal must be {vertices;edges}: " + text);
    std::string body = text.substr(1, text.size() - 2);
    std::string verts = body, edges;
    if (auto semi = body.find(';'); semi != std::string::npos) {
        verts = body.substr(0, semi);
        edges = body.substr(semi + 1);
    }
    auto split = [](const std::string& s) {
        std::vector<std::string> out;
        std::size_t start = 0;
        while (start <= s.size()) {
            auto comma = s.find(',', start);
            if (comma == std::string::npos) {
                if (start < s.size()) out.push_back(s.substr(start));
                break;
            }
            out.push_back(s.substr(start, comma - start));
            start = comma + 1;
        }
        return out;
    };
    std::map<int, Letter> decs;
    for (const auto& item : split(verts)) {
        auto colon = item.find(':');
        if (colon == std::string::npos || colon + 2 != item.size())
            throw parse_error("vertex entry must be idx:letter: " + item);
        int idx = std::stoi(item.substr(0, colon));
        if (decs.count(idx)) throw parse_error("duplicate vertex index " + std::to_string(idx));
        decs[idx] = sig.index_of(item[colon + 1]);
    }
    const int n = static_cast<int>(decs.size());
    std::vector<Letter> dec(static_cast<std::size_t>(n));
    for (const auto& [idx, d] : decs) {
        if (idx < 0 || idx >= n) throw parse_error("vertex indices must be 0..n-1");
        dec[static_cast<std::size_t>(idx)] = d;
    }
    std::vector<int> out(static_cast<std::size_t>(n), -1);
    for (const auto& e : split(edges)) {
        auto arrow = e.find("->");
        if (arrow == std::string::npos) throw parse_error("edge entry must be u->v: " + e);
        int u = std::stoi(e.substr(0, arrow));
        int v = std::stoi(e.substr(arrow + 2));
        if (u < 0 || u >= n || v < 0 || v >= n) throw parse_error("edge endpoint out of range: " + e);
        if (out[static_cast<std::size_t>(u)] >= 0)
            throw domain_error("vertex " + std::to_string(u) + " has out-degree >= 2");
        out[static_cast<std::size_t>(u)] = v;
    }
    return from_graph(std::move(dec), std::move(out));
}

std::map<AromaticForest, long long> aromatic_compose_forests(const AromaticForest& sigma,
                                                             const AromaticForest& tau) {
    std::map<AromaticForest, long long> out;
    const int ns = sigma.grade();
    const int nt = tau.grade();
    std::vector<int> roots;
    for (int v = 0; v < ns; ++v)
        if (sigma.out_edges()[static_cast<std::size_t>(v)] < 0) roots.push_back(v);

    std::vector<Letter> dec = sigma.decorations();
    dec.insert(dec.end(), tau.decorations().begin(), tau.decorations().end());
    std::vector<int> base_out = sigma.out_edges();
    for (int o : tau.out_edges()) base_out.push_back(o < 0 ? -1 : o + ns);

    // Each root independently keeps its out-degree 0 (choice -1) or gains an
    // edge into one of tau's vertices.
    std::vector<int> choice(roots.size(), -1);
    while (true) {
        std::vector<int> edges = base_out;
        for (std::size_t i = 0; i < roots.size(); ++i)
            if (choice[i] >= 0)
                edges[static_cast<std::size_t>(roots[i])] = ns + choice[i];
        out[AromaticForest::from_graph(dec, std::move(edges))] += 1;

        std::size_t pos = 0;
        for (; pos < choice.size(); ++pos) {
            if (choice[pos] + 1 < nt) {
                ++choice[pos];
                break;
            }
            choice[pos] = -1;
        }
        if (pos == choice.size()) break;
    }
    return out;
}

std::vector<AromaticForest> all_aromatic_forests_of_grade(int nodes, int alphabet_size) {
    std::vector<AromaticForest> out;
    if (nodes == 0) {
        out.push_back(AromaticForest::unit());
        return out;
    }
    std::vector<Letter> dec(static_cast<std::size_t>(nodes), 0);
    std::vector<int> edges(static_cast<std::size_t>(nodes), -1);
    auto rec_edges = [&](auto&& self, int v) -> void {
        if (v == nodes) {
            auto rec_dec = [&](auto&& dself, int w) -> void {
                if (w == nodes) {
                    out.push_back(AromaticForest::from_graph(dec, edges));
                    return;
                }
                for (int d = 0; d < alphabet_size; ++d) {
                    dec[static_cast<std::size_t>(w)] = static_cast<Letter>(d);
                    dself(dself, w + 1);
                }
            };
            rec_dec(rec_dec, 0);
            return;
        }
        for (int t = -1; t < nodes; ++t) {
            edges[static_cast<std::size_t>(v)] = t;
            self(self, v + 1);
        }
    };
    rec_edges(rec_edges, 0);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

} // namespace roughflow
