#include "dcqaoa/serialization.hpp"

#include <fmt/format.h>

#include <cmath>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <stdexcept>

#include "dcqaoa/errors.hpp"

namespace dcqaoa::io {

namespace {

using nlohmann::json;

std::string number_list(std::span<const double> values) {
  std::string out = "[";
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (k) out += ", ";
    out += format_double(values[k]);
  }
  return out + "]";
}

template <typename T>
T required(const json& j, const char* key) {
  if (!j.contains(key))
    throw std::invalid_argument(std::string("missing JSON field '") + key + "'");
  return j.at(key).get<T>();
}

}  // namespace

std::string format_double(double v) {
  // "-0" would read back as the integer 0 and lose its sign.
  if (v == 0.0 && std::signbit(v)) return "-0.0";
  return fmt::format("{:.17g}", v);
}

std::string graph_to_json(const problems::ProblemInstance& inst) {
  std::string out = fmt::format("{{\"kind\": \"{}\", \"n\": {}, \"seed\": {}, \"edges\": [",
                                problems::to_string(inst.kind), inst.n, inst.seed);
  for (std::size_t k = 0; k < inst.edges.size(); ++k) {
    const auto& e = inst.edges[k];
    if (k) out += ", ";
    out += fmt::format("[{}, {}, {}]", e.i, e.j, format_double(e.weight));
  }
  return out + "]}\n";
}

namespace {

problems::ProblemInstance parse_graph(const std::string& text) {
  const json j = json::parse(text);
  problems::ProblemInstance inst{
      problems::parse_problem_kind(required<std::string>(j, "kind")),
      required<std::size_t>(j, "n"), {}, required<std::uint64_t>(j, "seed")};
  for (const auto& e : j.at("edges")) {
    if (!e.is_array() || e.size() != 3)
      throw std::invalid_argument("edge entries must be [i, j, w]");
    inst.edges.push_back({e[0].get<std::size_t>(), e[1].get<std::size_t>(),
                          e[2].get<double>()});
  }
  problems::validate(inst);
  return inst;
}

}  // namespace

problems::ProblemInstance graph_from_json(const std::string& text) {
  try {
    return parse_graph(text);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("graph JSON: ") + e.what());
  }
}

std::string weights_to_json(const metalearn::TrainedCell& cell) {
  const auto& w = cell.weights;
  const auto& cfg = cell.config;
  std::string out = "{\n";
  out += fmt::format("  \"kind\": \"{}\",\n", metalearn::to_string(w.kind()));
  out += fmt::format("  \"d\": {},\n", w.dim());
  out += fmt::format("  \"algorithm\": \"{}\",\n", ansatz::to_string(cell.ansatz.algorithm));
  out += fmt::format("  \"p\": {},\n", cell.ansatz.p);
  out += fmt::format("  \"cd_term\": \"{}\",\n", ansatz::to_string(cell.ansatz.cd_class));
  out += fmt::format("  \"cd_prefactor\": {},\n", format_double(cell.ansatz.cd_prefactor));
  out += fmt::format("  \"problem\": \"{}\",\n", problems::to_string(cell.problem));
  out += fmt::format("  \"n\": {},\n", cell.n);
  out += "  \"weights\": {\n";
  const auto& mats = metalearn::CellWeights::matrix_names(w.kind());
  const auto& vecs = metalearn::CellWeights::vector_names(w.kind());
  std::vector<std::string> names(mats);
  names.insert(names.end(), vecs.begin(), vecs.end());
  for (std::size_t k = 0; k < names.size(); ++k) {
    out += fmt::format("    \"{}\": {}{}\n", names[k], number_list(w.block(names[k])),
                       k + 1 < names.size() ? "," : "");
  }
  out += "  },\n";
  out += "  \"training_log\": {\n";
  out += fmt::format("    \"trainer\": \"{}\",\n", optim::to_string(cfg.trainer));
  out += fmt::format("    \"learning_rate\": {},\n", format_double(cfg.learning_rate));
  out += fmt::format("    \"horizon\": {},\n", cfg.horizon);
  out += fmt::format("    \"max_epochs\": {},\n", cfg.max_epochs);
  out += fmt::format("    \"tolerance\": {},\n", format_double(cfg.tolerance));
  out += fmt::format("    \"loss_weights\": {},\n",
                     number_list(cfg.resolved_loss_weights()));
  out += fmt::format("    \"train_size\": {},\n", cfg.train_set_size);
  out += fmt::format("    \"seed\": {},\n", cfg.seed);
  out += fmt::format("    \"propose_argmin\": {},\n", cfg.propose_argmin ? "true" : "false");
  out += fmt::format("    \"epoch_losses\": {}\n", number_list(cell.epoch_losses));
  out += "  }\n}\n";
  return out;
}

namespace {

metalearn::TrainedCell parse_weights(const std::string& text) {
  const json j = json::parse(text);
  const auto kind = metalearn::parse_cell_kind(required<std::string>(j, "kind"));
  const auto d = required<std::size_t>(j, "d");
  const auto problem = problems::parse_problem_kind(required<std::string>(j, "problem"));
  ansatz::AnsatzConfig ac;
  ac.algorithm = ansatz::parse_algorithm(required<std::string>(j, "algorithm"));
  ac.p = required<std::size_t>(j, "p");
  ac.cd_class = ansatz::parse_cd_class(required<std::string>(j, "cd_term"));
  ac.cd_prefactor = required<double>(j, "cd_prefactor");
  if (ac.n_params() != d)
    throw std::invalid_argument("weights file: d does not match algorithm and p");

  metalearn::CellWeights w(kind, d);
  const json& blocks = j.at("weights");
  auto load = [&](const std::string& name) {
    auto dst = w.block(name);
    const auto src = blocks.at(name).get<std::vector<double>>();
    if (src.size() != dst.size())
      throw std::invalid_argument("weights file: block '" + name + "' has wrong size");
    std::copy(src.begin(), src.end(), dst.begin());
  };
  for (const auto& name : metalearn::CellWeights::matrix_names(kind)) load(name);
  for (const auto& name : metalearn::CellWeights::vector_names(kind)) load(name);

  metalearn::TrainConfig cfg;
  std::vector<double> losses;
  if (j.contains("training_log")) {
    const json& log = j.at("training_log");
    cfg.trainer = optim::parse_optimizer_kind(required<std::string>(log, "trainer"));
    cfg.learning_rate = required<double>(log, "learning_rate");
    cfg.horizon = required<std::size_t>(log, "horizon");
    cfg.max_epochs = required<std::size_t>(log, "max_epochs");
    cfg.tolerance = required<double>(log, "tolerance");
    cfg.loss_weights = required<std::vector<double>>(log, "loss_weights");
    cfg.train_set_size = required<std::size_t>(log, "train_size");
    cfg.seed = required<std::uint64_t>(log, "seed");
    cfg.propose_argmin = log.value("propose_argmin", false);
    losses = required<std::vector<double>>(log, "epoch_losses");
  }
  return {std::move(w), problem, required<std::size_t>(j, "n"), ac, cfg, losses};
}

}  // namespace

metalearn::TrainedCell weights_from_json(const std::string& text) {
  try {
    return parse_weights(text);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("weights JSON: ") + e.what());
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ArtifactError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& contents) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << contents;
}

void save_weights(const std::filesystem::path& path,
                  const metalearn::TrainedCell& cell) {
  write_file(path, weights_to_json(cell));
}

metalearn::TrainedCell load_weights(const std::filesystem::path& path) {
  return weights_from_json(read_file(path));
}

}  // namespace dcqaoa::io
