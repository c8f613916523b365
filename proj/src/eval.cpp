#include "entity_embed/eval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "entity_embed/clustering.hpp"

namespace entity_embed {

namespace {

std::vector<std::string> split_words(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    std::string w;
    while (in >> w) out.push_back(std::move(w));
    return out;
}

// resolves a dataset key to a vector, optionally averaging space-separated
// components per the multi-word convention
std::optional<std::vector<double>> resolve_key(const KeyedVectors& vec, const std::string& key,
                                               bool compose) {
    if (auto i = vec.find(key)) {
        const auto row = vec.row(*i);
        return std::vector<double>(row.begin(), row.end());
    }
    if (!compose || key.find(' ') == std::string::npos) return std::nullopt;
    const auto words = split_words(key);
    std::size_t found = 0;
    std::vector<double> sum(static_cast<std::size_t>(vec.dim()), 0.0);
    for (const auto& w : words) {
        if (auto i = vec.find(w)) {
            const auto row = vec.row(*i);
            for (std::size_t k = 0; k < sum.size(); ++k) sum[k] += row[k];
            ++found;
        }
    }
    if (found == 0) return std::nullopt;
    for (double& v : sum) v /= static_cast<double>(found);
    return sum;
}

std::vector<double> ranks_with_ties(std::span<const double> x) {
    const std::size_t n = x.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
    std::vector<double> ranks(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && x[order[j + 1]] == x[order[i]]) ++j;
        const double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = avg;
        i = j + 1;
    }
    return ranks;
}

double norm(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

}  // namespace

std::size_t CategorizationDataset::num_categories() const {
    std::set<std::string> cats;
    for (const auto& item : items) cats.insert(item.category);
    return cats.size();
}

double cosine(std::span<const double> u, std::span<const double> v) {
    if (u.size() != v.size()) throw std::invalid_argument("cosine: dimension mismatch");
    const double nu = norm(u), nv = norm(v);
    if (nu == 0.0 || nv == 0.0) throw std::invalid_argument("cosine: zero vector");
    double s = 0.0;
    for (std::size_t k = 0; k < u.size(); ++k) s += u[k] * v[k];
    return s / (nu * nv);
}

double pearson(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("pearson: need >= 2 pairs");
    const auto n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx, dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0) throw std::invalid_argument("pearson: zero variance");
    return sxy / std::sqrt(sxx * syy);
}

double spearman(std::span<const double> x, std::span<const double> y) {
    const auto rx = ranks_with_ties(x);
    const auto ry = ranks_with_ties(y);
    return pearson(rx, ry);
}

RelatednessResult relatedness_eval(const KeyedVectors& vec, const RelatednessDataset& ds,
                                   Correlation corr, bool compose_multiword) {
    std::vector<double> cosines, scores;
    RelatednessResult out;
    for (const auto& pair : ds.pairs) {
        auto u = resolve_key(vec, pair.w1, compose_multiword);
        auto v = resolve_key(vec, pair.w2, compose_multiword);
        if (!u || !v) {
            ++out.skipped;
            continue;
        }
        cosines.push_back(cosine(*u, *v));
        scores.push_back(pair.score);
    }
    out.evaluated = cosines.size();
    if (out.evaluated < 2)
        throw std::runtime_error("relatedness: fewer than 2 in-vocabulary pairs");
    out.r = corr == Correlation::PEARSON ? pearson(cosines, scores) : spearman(cosines, scores);
    return out;
}

AnalogyResult analogy_eval(const KeyedVectors& vec, const AnalogyDataset& ds, bool typed,
                           AnalogyCombo combo) {
    AnalogyResult out;
    const int dim = vec.dim();
    std::size_t correct = 0;

    // unit vectors once; argmax over cosine == argmax over normalized dot
    std::vector<double> units(vec.data());
    std::vector<char> usable(vec.size(), 1);
    for (std::size_t i = 0; i < vec.size(); ++i) {
        double* row = units.data() + i * static_cast<std::size_t>(dim);
        double n = 0.0;
        for (int k = 0; k < dim; ++k) n += row[k] * row[k];
        n = std::sqrt(n);
        if (n == 0.0) {
            usable[i] = 0;
            continue;
        }
        for (int k = 0; k < dim; ++k) row[k] /= n;
    }

    std::vector<double> query(static_cast<std::size_t>(dim));
    for (const auto& item : ds.items) {
        const auto a = vec.find(item.a), b = vec.find(item.b), x = vec.find(item.x),
                   y = vec.find(item.y);
        if (!a || !b || !x || !y) {
            ++out.skipped;
            continue;
        }
        ++out.evaluated;
        const auto ra = vec.row(*a), rb = vec.row(*b), rx = vec.row(*x);
        for (int k = 0; k < dim; ++k) {
            const auto ku = static_cast<std::size_t>(k);
            query[ku] = combo == AnalogyCombo::A_MINUS_B ? ra[ku] - rb[ku] + rx[ku]
                                                     : rb[ku] - ra[ku] + rx[ku];
        }
        const double qn = norm(query);
        if (qn == 0.0) continue;  // no nearest neighbor is defined; counted incorrect

        // raw dots against unit rows share the argmax with cosine but are not
        // bounded by 1, so start from -infinity
        double best = -std::numeric_limits<double>::infinity();
        std::size_t best_i = vec.size();
        for (std::size_t i = 0; i < vec.size(); ++i) {
            if (i == *a || i == *b || i == *x || !usable[i]) continue;
            if (typed && item.type && vec.entity_type(i) != item.type) continue;
            const double* row = units.data() + i * static_cast<std::size_t>(dim);
            double s = 0.0;
            for (int k = 0; k < dim; ++k) s += query[static_cast<std::size_t>(k)] * row[k];
            if (s > best) {
                best = s;
                best_i = i;
            }
        }
        if (best_i == vec.size()) {
            ++out.empty_candidate_items;
            continue;
        }
        if (best_i == *y) ++correct;
    }
    if (out.evaluated > 0)
        out.accuracy = static_cast<double>(correct) / static_cast<double>(out.evaluated);
    return out;
}

double purity(std::span<const int> assignments, std::span<const int> labels) {
    if (assignments.size() != labels.size())
        throw std::invalid_argument("purity: length mismatch");
    if (assignments.empty()) throw std::invalid_argument("purity: empty input");
    std::unordered_map<int, std::unordered_map<int, std::size_t>> per_cluster;
    for (std::size_t i = 0; i < assignments.size(); ++i)
        ++per_cluster[assignments[i]][labels[i]];
    std::size_t majority_sum = 0;
    for (const auto& [cluster, hist] : per_cluster) {
        std::size_t best = 0;
        for (const auto& [label, count] : hist) best = std::max(best, count);
        majority_sum += best;
    }
    return static_cast<double>(majority_sum) / static_cast<double>(assignments.size());
}

CategorizationResult categorization_eval(const KeyedVectors& vec, const CategorizationDataset& ds,
                                         ClusterMethod method, std::uint64_t seed,
                                         bool compose_multiword) {
    CategorizationResult out;
    const auto k = static_cast<int>(ds.num_categories());
    if (k < 2) throw std::invalid_argument("categorization: need >= 2 categories");

    std::vector<double> data;
    std::vector<int> labels;
    std::unordered_map<std::string, int> label_ids;
    for (const auto& item : ds.items) {
        auto v = resolve_key(vec, item.key, compose_multiword);
        if (!v) {
            ++out.skipped;
            continue;
        }
        data.insert(data.end(), v->begin(), v->end());
        auto [it, _] = label_ids.emplace(item.category, static_cast<int>(label_ids.size()));
        labels.push_back(it->second);
    }
    out.evaluated = labels.size();
    if (out.evaluated < static_cast<std::size_t>(k))
        throw std::runtime_error("categorization: fewer in-vocabulary items than clusters");

    std::vector<int> assignments;
    if (method == ClusterMethod::KMEANS)
        assignments = minibatch_kmeans(data, out.evaluated, vec.dim(), k, seed).assignments;
    else
        assignments = agglomerative_ward(data, out.evaluated, vec.dim(), k);
    out.purity = purity(assignments, labels);
    return out;
}

std::vector<Neighbor> nearest_neighbors_of_vector(const KeyedVectors& vec,
                                                  std::span<const double> query, std::size_t k,
                                                  std::optional<EntityType> type_filter,
                                                  std::optional<std::size_t> exclude) {
    std::vector<Neighbor> scored;
    for (std::size_t i = 0; i < vec.size(); ++i) {
        if (exclude && i == *exclude) continue;
        if (type_filter && vec.entity_type(i) != type_filter) continue;
        const auto row = vec.row(i);
        if (norm(row) == 0.0) continue;
        scored.push_back({vec.key(i), cosine(query, row)});
    }
    // stable: equal cosines keep vocabulary order
    std::stable_sort(scored.begin(), scored.end(),
                     [](const Neighbor& a, const Neighbor& b) { return a.cosine > b.cosine; });
    if (scored.size() > k) scored.resize(k);
    return scored;
}

std::vector<Neighbor> nearest_neighbors(const KeyedVectors& vec, const std::string& query,
                                        std::size_t k, std::optional<EntityType> type_filter) {
    const auto qi = vec.find(query);
    if (!qi) throw std::runtime_error("nearest neighbors: unknown key \"" + query + "\"");
    return nearest_neighbors_of_vector(vec, vec.row(*qi), k, type_filter, qi);
}

std::vector<double> compose_multiword(const KeyedVectors& vec, std::span<const std::string> words,
                                      std::size_t* oov) {
    std::vector<double> sum(static_cast<std::size_t>(vec.dim()), 0.0);
    std::size_t found = 0, missing = 0;
    for (const auto& w : words) {
        if (auto i = vec.find(w)) {
            const auto row = vec.row(*i);
            for (std::size_t k = 0; k < sum.size(); ++k) sum[k] += row[k];
            ++found;
        } else {
            ++missing;
        }
    }
    if (oov) *oov = missing;
    if (found == 0) throw std::runtime_error("compose: no component in vocabulary");
    for (double& v : sum) v /= static_cast<double>(found);
    return sum;
}

}  // namespace entity_embed
