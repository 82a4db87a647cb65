#include "generators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace bmc::testing {

namespace {

std::vector<Edge> random_edges(Rng& rng, int n, double density, auto&& weight) {
  std::bernoulli_distribution coin(density);
  std::vector<Edge> edges;
  for (int u = 0; u < n; ++u) {
    for (int v = u + 1; v < n; ++v) {
      if (coin(rng)) edges.push_back({u, v, weight()});
    }
  }
  return edges;
}

std::vector<DemandPair> disjoint_pairs(Rng& rng, int n, int k) {
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  std::vector<DemandPair> pairs;
  for (int i = 0; i < k; ++i) pairs.push_back({perm[2 * i], perm[2 * i + 1]});
  return pairs;
}

}  // namespace

BmcInstance random_instance(Rng& rng, int n, int k, int wmax, double density) {
  std::uniform_int_distribution<int> w(0, wmax);
  auto edges = random_edges(rng, n, density, [&] { return static_cast<double>(w(rng)); });
  return BmcInstance(n, std::move(edges), disjoint_pairs(rng, n, k));
}

BmcInstance random_real_instance(Rng& rng, int n, int k, double wmax, double density) {
  std::uniform_real_distribution<double> w(0.0, wmax);
  auto edges = random_edges(rng, n, density, [&] { return w(rng); });
  return BmcInstance(n, std::move(edges), disjoint_pairs(rng, n, k));
}

BmcInstance random_overlapping_instance(Rng& rng, int n, int k, int wmax, double density) {
  std::uniform_int_distribution<int> w(0, wmax);
  auto edges = random_edges(rng, n, density, [&] { return static_cast<double>(w(rng)); });
  std::uniform_int_distribution<int> vert(0, n - 1);
  std::vector<DemandPair> pairs;
  while (static_cast<int>(pairs.size()) < k) {
    const int s = vert(rng), t = vert(rng);
    if (s != t) pairs.push_back({s, t});
  }
  return BmcInstance(n, std::move(edges), std::move(pairs));
}

MinUncutInstance random_minuncut(Rng& rng, int num_vars, int num_constraints) {
  MinUncutInstance mu;
  mu.num_vars = num_vars;
  std::uniform_int_distribution<int> var(0, num_vars - 1), bit(0, 1);
  for (int c = 0; c < num_constraints; ++c) mu.constraints.push_back({var(rng), var(rng), bit(rng)});
  return mu;
}

PathInstance random_path(Rng& rng, int m, int max_pairs, int wmax) {
  PathInstance p;
  std::uniform_int_distribution<int> w(0, wmax), vert(0, m), count(0, max_pairs);
  for (int i = 0; i < m; ++i) p.weights.push_back(w(rng));
  const int k = m > 0 ? count(rng) : 0;
  while (static_cast<int>(p.pairs.size()) < k) {
    const int a = vert(rng), b = vert(rng);
    if (a != b) p.pairs.push_back({a, b});
  }
  return p;
}

FiniteMetric random_graph_metric(Rng& rng, int n, double scale) {
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<std::vector<double>> d(n, std::vector<double>(n, inf));
  std::uniform_real_distribution<double> len(1e-3 * scale, scale);
  std::bernoulli_distribution extra(0.3);
  for (int v = 0; v < n; ++v) d[v][v] = 0.0;
  auto link = [&](int u, int v) {
    const double l = len(rng);
    d[u][v] = d[v][u] = std::min(d[u][v], l);
  };
  for (int v = 1; v < n; ++v) link(v, std::uniform_int_distribution<int>(0, v - 1)(rng));
  for (int u = 0; u < n; ++u) {
    for (int v = u + 1; v < n; ++v) {
      if (extra(rng)) link(u, v);
    }
  }
  for (int m = 0; m < n; ++m) {
    for (int u = 0; u < n; ++u) {
      for (int v = 0; v < n; ++v) d[u][v] = std::min(d[u][v], d[u][m] + d[m][v]);
    }
  }
  FiniteMetric out(n);
  for (int u = 0; u < n; ++u) {
    for (int v = u + 1; v < n; ++v) out.set(u, v, d[u][v]);
  }
  return out;
}

VectorEmbedding hypercube_embedding(Rng& rng, const BmcInstance& inst, int dim) {
  const int n = inst.num_vertices();
  const auto partner = inst.partners();
  std::bernoulli_distribution coin(0.5);
  const double scale = 1.0 / std::sqrt(static_cast<double>(dim));
  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(dim, n);
  std::vector<bool> done(static_cast<std::size_t>(n), false);
  for (int v = 0; v < n; ++v) {
    if (done[v]) continue;
    for (int i = 0; i < dim; ++i) x(i, v) = coin(rng) ? scale : -scale;
    done[v] = true;
    if (partner[v] >= 0) {
      x.col(partner[v]) = -x.col(v);
      done[partner[v]] = true;
    }
  }
  VectorEmbedding emb;
  emb.vectors = x;
  emb.metric = FiniteMetric(n, MetricOrigin::Sdp);
  for (int u = 0; u < n; ++u) {
    for (int v = u + 1; v < n; ++v) emb.metric.set(u, v, (x.col(u) - x.col(v)).squaredNorm());
  }
  return emb;
}

}  // namespace bmc::testing

namespace bmc::testing {

EmbeddedInstance clustered_embedding(Rng& rng, int k, int cluster_size, double cluster_prob,
                                     int dim, double heavy) {
  std::bernoulli_distribution coin(0.5), clustered(cluster_prob), light_edge(0.3);
  std::uniform_real_distribution<double> light(0.0, 1.0);
  std::uniform_int_distribution<int> coord(0, dim - 1);
  const double scale = 1.0 / std::sqrt(static_cast<double>(dim));

  std::vector<Eigen::VectorXd> points;
  std::vector<DemandPair> pairs;
  for (int i = 0; i < k; ++i) {
    Eigen::VectorXd s(dim);
    for (int j = 0; j < dim; ++j) s(j) = coin(rng) ? scale : -scale;
    pairs.push_back({2 * i, 2 * i + 1});
    points.push_back(s);
    points.push_back(-s);
  }
  std::vector<Edge> edges;
  for (int term = 0; term < 2 * k; ++term) {
    if (!clustered(rng)) continue;
    const int first = static_cast<int>(points.size());
    for (int c = 0; c < cluster_size; ++c) {
      Eigen::VectorXd p = points[term];
      const int j = coord(rng);
      p(j) = -p(j);
      points.push_back(p);
      edges.push_back({term, first + c, heavy});
      for (int other = first; other < first + c; ++other) edges.push_back({other, first + c, heavy});
    }
  }
  const int n = static_cast<int>(points.size());
  for (int u = 0; u < n; ++u) {
    for (int v = u + 1; v < n; ++v) {
      if (light_edge(rng)) edges.push_back({u, v, light(rng)});
    }
  }
  EmbeddedInstance out{BmcInstance(n, std::move(edges), std::move(pairs)), {}};
  out.embedding.vectors = Eigen::MatrixXd(dim, n);
  for (int v = 0; v < n; ++v) out.embedding.vectors.col(v) = points[v];
  out.embedding.metric = FiniteMetric(n, MetricOrigin::Sdp);
  for (int u = 0; u < n; ++u) {
    for (int v = u + 1; v < n; ++v) {
      out.embedding.metric.set(u, v, (points[u] - points[v]).squaredNorm());
    }
  }
  return out;
}

}  // namespace bmc::testing
