#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "sdsm/distance.hpp"
#include "sdsm/fisher.hpp"
#include "sdsm/io.hpp"
#include "sdsm/miner.hpp"
#include "sdsm/neighborhood.hpp"
#include "sdsm/synth.hpp"
#include "sdsm/trajectory.hpp"

namespace py = pybind11;

namespace {

sdsm::LabeledDataset dataset_from_lists(
    const std::vector<std::pair<int, std::vector<std::pair<double, double>>>>& trajs,
    const std::vector<int>& labels) {
  std::vector<sdsm::Trajectory> out;
  out.reserve(trajs.size());
  for (const auto& [id, pts] : trajs) {
    sdsm::Trajectory t;
    t.id = id;
    t.points.reserve(pts.size());
    for (const auto& [x, y] : pts) t.points.push_back(sdsm::Point{x, y});
    out.push_back(std::move(t));
  }
  return sdsm::LabeledDataset(std::move(out), labels);
}

py::dict result_to_dict(const sdsm::MiningResult& r, const sdsm::LabeledDataset& ds) {
  py::list discoveries;
  for (const sdsm::DiscoveryRecord& d : r.discoveries) {
    py::dict row;
    row["traj_id"] = ds.id_of(d.ref.traj);
    row["start"] = d.ref.start;
    row["end"] = d.ref.end;
    row["sup_pos"] = d.sup_pos;
    row["sup_neg"] = d.sup_neg;
    row["sup_total"] = d.sup_total;
    row["p_value"] = d.p_value;
    row["adjusted_p"] = d.adjusted_p;
    discoveries.append(std::move(row));
  }
  py::dict out;
  out["delta_star"] = r.delta_star;
  out["discoveries"] = std::move(discoveries);
  out["nodes_visited"] = r.diag.nodes_visited;
  out["chains_pruned"] = r.diag.chains_pruned;
  out["tests_evaluated"] = r.diag.tests_evaluated;
  out["bottom_k_min_p"] = r.diag.bottom_k_min_p;
  return out;
}

sdsm::MiningConfig config_from_kwargs(double eps, int min_len, int top_k, int perms,
                                      double alpha, std::uint64_t seed, int threads) {
  sdsm::MiningConfig c;
  c.eps = eps;
  c.min_len = min_len;
  c.top_k = top_k;
  c.perms = perms;
  c.alpha = alpha;
  c.seed = seed;
  c.threads = threads;
  return c;
}

}  // namespace

PYBIND11_MODULE(_sdsm, m) {
  m.doc() = "Discriminative sub-trajectory mining with FWER control";

  py::class_<sdsm::LabeledDataset>(m, "Dataset")
      .def(py::init(&dataset_from_lists), py::arg("trajectories"), py::arg("labels"))
      .def_property_readonly("n", &sdsm::LabeledDataset::size)
      .def_property_readonly("n_pos", &sdsm::LabeledDataset::n_pos)
      .def_property_readonly("n_neg", &sdsm::LabeledDataset::n_neg)
      .def("id_of", &sdsm::LabeledDataset::id_of)
      .def("points",
           [](const sdsm::LabeledDataset& ds, int index) {
             std::vector<std::pair<double, double>> pts;
             for (const sdsm::Point& p : ds.traj(index).points) pts.emplace_back(p.x, p.y);
             return pts;
           })
      .def("label", &sdsm::LabeledDataset::label);

  m.def("load_dataset", &sdsm::load_dataset, py::arg("traj_path"), py::arg("labels_path"));

  m.def(
      "generate",
      [](int n_pos, int n_neg, int traj_len, double step_sigma, int planted_len,
         double planted_frac, double noise_sigma, std::uint64_t seed) {
        sdsm::GenConfig g;
        g.n_pos = n_pos;
        g.n_neg = n_neg;
        g.traj_len = traj_len;
        g.step_sigma = step_sigma;
        g.planted_len = planted_len;
        g.planted_frac = planted_frac;
        g.noise_sigma = noise_sigma;
        g.seed = seed;
        sdsm::SynthData data = sdsm::generate(g);
        py::list manifest;
        for (const sdsm::CarrierWindow& c : data.manifest) {
          manifest.append(py::make_tuple(c.traj_id, c.start, c.end));
        }
        return py::make_tuple(std::move(data.dataset), std::move(manifest));
      },
      py::arg("n_pos"), py::arg("n_neg"), py::arg("traj_len"), py::arg("step_sigma") = 1.0,
      py::arg("planted_len") = 0, py::arg("planted_frac") = 0.0,
      py::arg("noise_sigma") = 0.0, py::arg("seed") = 1);

  m.def(
      "mine",
      [](const sdsm::LabeledDataset& ds, double eps, int min_len, int top_k, int perms,
         double alpha, std::uint64_t seed, int threads) {
        return result_to_dict(
            sdsm::mine(ds, config_from_kwargs(eps, min_len, top_k, perms, alpha, seed, threads)), ds);
      },
      py::arg("dataset"), py::arg("eps"), py::arg("min_len") = 5, py::arg("top_k") = 5,
      py::arg("perms") = 1000, py::arg("alpha") = 0.05, py::arg("seed") = 1,
      py::arg("threads") = 1);

  m.def(
      "oracle_mine",
      [](const sdsm::LabeledDataset& ds, double eps, int min_len, int top_k, int perms,
         double alpha, std::uint64_t seed, int threads) {
        return result_to_dict(
            sdsm::oracle_mine(ds, config_from_kwargs(eps, min_len, top_k, perms, alpha, seed, threads)),
            ds);
      },
      py::arg("dataset"), py::arg("eps"), py::arg("min_len") = 5, py::arg("top_k") = 5,
      py::arg("perms") = 1000, py::arg("alpha") = 0.05, py::arg("seed") = 1,
      py::arg("threads") = 1);

  m.def("fisher_two_sided_p",
        [](int sup_pos, int sup_total, int n_pos, int n_neg) {
          return sdsm::FisherTable(n_pos, n_neg).two_sided_p(sup_pos, sup_total);
        },
        py::arg("sup_pos"), py::arg("sup_total"), py::arg("n_pos"), py::arg("n_neg"));

  m.def("p_lower_bound",
        [](int sup_total, int n_pos, int n_neg) {
          return sdsm::FisherTable(n_pos, n_neg).min_attainable_p(sup_total);
        },
        py::arg("sup_total"), py::arg("n_pos"), py::arg("n_neg"));

  m.def("avg_top_k_max",
        [](const std::vector<double>& dists, int k) { return sdsm::avg_top_k_max(dists, k); },
        py::arg("dists"), py::arg("k"));

  m.def("calibrate_epsilon", &sdsm::calibrate_epsilon, py::arg("dataset"),
        py::arg("min_len"), py::arg("k"), py::arg("target_support"));
}
