// Apache License, Version 2.0, refer to LICENSE.txt

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "idcsbm/generator.hpp"
#include "idcsbm/metrics.hpp"
#include "idcsbm/model.hpp"
#include "idcsbm/oracle.hpp"
#include "idcsbm/sampler.hpp"

namespace py = pybind11;
using namespace idcsbm;

namespace {

Partition to_partition(const std::vector<int>& z) { return Partition::from_labels(z); }

std::vector<std::size_t> to_list(const Partition& p) { return p.labels(); }

ObservationMask to_mask(const std::vector<std::pair<std::size_t, std::size_t>>& missing) {
  ObservationMask mask;
  for (const auto& [i, j] : missing) mask.missing.push_back(make_dyad(i, j));
  std::sort(mask.missing.begin(), mask.missing.end());
  mask.missing.erase(std::unique(mask.missing.begin(), mask.missing.end()), mask.missing.end());
  return mask;
}

py::dict trace_dict(const ChainTrace& t, const ObservationMask& mask) {
  std::vector<std::size_t> groups;
  std::vector<double> ev, alpha, gamma, kappa, lambda;
  for (const auto& r : t.records) {
    groups.push_back(r.groups);
    ev.push_back(r.log_evidence);
    alpha.push_back(r.hp.alpha);
    gamma.push_back(r.hp.gamma);
    kappa.push_back(r.hp.kappa);
    lambda.push_back(r.hp.lambda);
  }
  py::list snaps;
  for (const auto& s : t.snapshots) snaps.append(py::make_tuple(s.iteration, s.part.labels()));
  py::dict d;
  d["seed"] = t.seed;
  d["burn_in"] = t.burn_in;
  d["L"] = groups;
  d["log_evidence"] = ev;
  d["alpha"] = alpha;
  d["gamma"] = gamma;
  d["kappa"] = kappa;
  d["lambda"] = lambda;
  d["snapshots"] = snaps;
  if (!mask.empty() && t.post_burn_in() > 0) {
    py::dict scores;
    for (const auto& [dyad, s] : predictive_scores(t, mask)) scores[py::make_tuple(dyad.i, dyad.j)] = s;
    d["scores"] = scores;
  }
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Infinite degree-corrected stochastic blockmodel core";

  py::class_<Hyperparams>(m, "Hyperparams")
      .def(py::init([](double alpha, double gamma, double kappa, double lambda) {
             Hyperparams hp{alpha, gamma, kappa, lambda};
             hp.validate();
             return hp;
           }),
           py::arg("alpha") = 1.0, py::arg("gamma") = 1.0, py::arg("kappa") = 1.0, py::arg("lambda_") = 1.0)
      .def_readwrite("alpha", &Hyperparams::alpha)
      .def_readwrite("gamma", &Hyperparams::gamma)
      .def_readwrite("kappa", &Hyperparams::kappa)
      .def_readwrite("lambda_", &Hyperparams::lambda)
      .def("__repr__", [](const Hyperparams& h) {
        return "Hyperparams(alpha=" + std::to_string(h.alpha) + ", gamma=" + std::to_string(h.gamma) +
               ", kappa=" + std::to_string(h.kappa) + ", lambda_=" + std::to_string(h.lambda) + ")";
      });

  py::class_<Network>(m, "Network")
      .def(py::init<std::size_t>(), py::arg("n"))
      .def_property_readonly("size", &Network::size)
      .def_property_readonly("labels", &Network::labels)
      .def("__len__", &Network::size)
      .def("at", &Network::at)
      .def("set", &Network::set)
      .def("add", &Network::add)
      .def("total", &Network::total)
      .def("to_edge_list", [](const Network& n) { return to_edge_list(n); })
      .def("__eq__", [](const Network& a, const Network& b) { return a == b; });

  m.def("load_edge_list", [](const std::string& text) { return load_edge_list(text); }, py::arg("text"));

  m.def(
      "log_evidence",
      [](const Network& net, const std::vector<int>& z, const Hyperparams& hp, const std::string& model) {
        return log_evidence(net, to_partition(z), hp, parse_model_kind(model));
      },
      py::arg("net"), py::arg("z"), py::arg("hp"), py::arg("model") = "dc");

  m.def(
      "log_crp", [](const std::vector<int>& z, double alpha) { return log_crp(to_partition(z), alpha); },
      py::arg("z"), py::arg("alpha"));

  m.def(
      "gibbs_conditional",
      [](std::size_t node, const Network& net, const std::vector<int>& z, const Hyperparams& hp,
         const std::string& model) {
        return gibbs_conditional(node, net, to_partition(z), hp, parse_model_kind(model));
      },
      py::arg("node"), py::arg("net"), py::arg("z"), py::arg("hp"), py::arg("model") = "dc");

  m.def(
      "enumerate_partitions",
      [](std::size_t n) {
        std::vector<std::vector<std::size_t>> out;
        for (const auto& p : enumerate_partitions(n)) out.push_back(to_list(p));
        return out;
      },
      py::arg("n"));

  m.def(
      "exact_posterior",
      [](const Network& net, const Hyperparams& hp, const std::string& model) {
        const auto post = exact_posterior(net, hp, parse_model_kind(model));
        std::vector<std::vector<std::size_t>> parts;
        for (const auto& p : post.partitions) parts.push_back(to_list(p));
        return py::make_tuple(parts, post.probs);
      },
      py::arg("net"), py::arg("hp"), py::arg("model") = "dc");

  m.def(
      "sample_network",
      [](std::size_t n, const Hyperparams& hp, std::uint64_t seed) {
        Rng rng(seed);
        auto gen = sample_network(n, hp, rng);
        py::dict truth;
        truth["z"] = to_list(gen.truth.part);
        truth["theta"] = gen.truth.theta;
        truth["eta"] = gen.truth.eta;
        return py::make_tuple(std::move(gen.net), truth);
      },
      py::arg("n"), py::arg("hp"), py::arg("seed"));

  m.def(
      "make_holdout",
      [](const Network& net, double fraction, std::uint64_t seed) {
        const auto mask = make_holdout(net, fraction, seed);
        std::vector<std::pair<std::size_t, std::size_t>> dyads;
        for (const auto& d : mask.missing) dyads.emplace_back(d.i, d.j);
        return py::make_tuple(dyads, *mask.truth);
      },
      py::arg("net"), py::arg("fraction"), py::arg("seed"));

  m.def(
      "run_chains",
      [](const Network& net, std::size_t iterations, std::size_t burn_in, std::size_t restarts,
         std::uint64_t seed, const std::string& model, const Hyperparams& initial,
         const std::vector<std::pair<std::size_t, std::size_t>>& missing, const std::vector<std::string>& fixed,
         std::size_t threads) {
        ChainConfig cfg;
        cfg.iterations = iterations;
        cfg.burn_in = burn_in;
        cfg.kind = parse_model_kind(model);
        cfg.initial = initial;
        for (const auto& name : fixed) {
          const Hyper h = parse_hyper(name);
          cfg.fix(h, hyper_value(initial, h));
        }
        const ObservationMask mask = to_mask(missing);
        std::vector<ChainTrace> traces;
        {
          py::gil_scoped_release release;
          traces = run_chains(net, mask, cfg, restarts, seed, threads);
        }
        py::list out;
        for (const auto& t : traces) out.append(trace_dict(t, mask));
        return out;
      },
      py::arg("net"), py::arg("iterations") = 1000, py::arg("burn_in") = 500, py::arg("restarts") = 1,
      py::arg("seed") = 0, py::arg("model") = "dc", py::arg("initial") = Hyperparams{},
      py::arg("missing") = std::vector<std::pair<std::size_t, std::size_t>>{},
      py::arg("fixed") = std::vector<std::string>{}, py::arg("threads") = 1);

  m.def(
      "nmi", [](const std::vector<int>& a, const std::vector<int>& b) { return nmi(to_partition(a), to_partition(b)); },
      py::arg("a"), py::arg("b"));

  m.def(
      "auc",
      [](const std::vector<double>& links, const std::vector<double>& nonlinks) {
        std::vector<ScoredDyad> scored;
        for (double s : links) scored.push_back({Dyad{}, s, DyadLabel::link});
        for (double s : nonlinks) scored.push_back({Dyad{}, s, DyadLabel::nonlink});
        return auc(scored);
      },
      py::arg("links"), py::arg("nonlinks"));
}
