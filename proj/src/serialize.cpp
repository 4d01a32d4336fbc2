#include "frocc/serialize.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace frocc {

using nlohmann::json;

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

namespace {

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

json kernel_to_json(const Kernel& k) {
  json params = json::object();
  std::visit(
      [&](const auto& kern) {
        using K = std::decay_t<decltype(kern)>;
        if constexpr (std::is_same_v<K, RbfKernel>) {
          params["gamma"] = kern.gamma;
        } else if constexpr (std::is_same_v<K, PolynomialKernel>) {
          params["degree"] = kern.degree;
          params["coef0"] = kern.coef0;
        } else if constexpr (std::is_same_v<K, SigmoidKernel>) {
          params["gamma"] = kern.gamma;
          params["coef0"] = kern.coef0;
        }
      },
      k);
  return {{"variant", kernel_name(k)}, {"params", params}};
}

Kernel kernel_from_json(const json& j) {
  const auto variant = j.at("variant").get<std::string>();
  const json& p = j.at("params");
  Kernel k;
  if (variant == "linear") {
    k = LinearKernel{};
  } else if (variant == "rbf") {
    k = RbfKernel{p.at("gamma").get<double>()};
  } else if (variant == "poly") {
    k = PolynomialKernel{p.at("degree").get<int>(), p.at("coef0").get<double>()};
  } else if (variant == "sigmoid") {
    k = SigmoidKernel{p.at("gamma").get<double>(), p.at("coef0").get<double>()};
  } else {
    throw FormatError("unknown kernel variant '" + variant + "'");
  }
  validate_kernel(k);
  return k;
}

json vector_to_json(const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

Eigen::VectorXd vector_from_json(const json& j, Eigen::Index d) {
  const auto values = j.get<std::vector<double>>();
  if (static_cast<Eigen::Index>(values.size()) != d) throw FormatError("vector has the wrong length");
  return Eigen::Map<const Eigen::VectorXd>(values.data(), d);
}

json model_document(const FroccModel& model) {
  json doc;
  doc["format_version"] = model.format_version();
  doc["m"] = model.m();
  doc["d"] = model.dim();
  doc["epsilon"] = model.epsilon();
  doc["kernel"] = kernel_to_json(model.kernel());
  doc["mode"] = mode_name(model.mode());
  doc["seed"] = model.seed().value;
  doc["n_train"] = model.n_train();

  json directions = json::array();
  for (Eigen::Index i = 0; i < model.m(); ++i) {
    const auto row = model.directions().row(i);
    directions.push_back(std::vector<double>(row.data(), row.data() + row.size()));
  }
  doc["directions"] = std::move(directions);

  json per = json::array();
  std::visit(
      [&](const auto& sets) {
        using Sets = std::decay_t<decltype(sets)>;
        for (const auto& s : sets) {
          json entry{{"min_raw", s.min_raw()}, {"max_raw", s.max_raw()}};
          if constexpr (std::is_same_v<Sets, FroccModel::IntervalSets>) {
            json intervals = json::array();
            for (const auto& iv : s.intervals()) intervals.push_back({iv.lo, iv.hi});
            entry["intervals"] = std::move(intervals);
          } else {
            entry["occupied"] = s.occupied();
          }
          per.push_back(std::move(entry));
        }
      },
      model.per_direction());
  doc["per_direction"] = std::move(per);

  if (model.standardizer()) {
    doc["standardizer"] = {{"mean", vector_to_json(model.standardizer()->mean)},
                           {"scale", vector_to_json(model.standardizer()->scale)}};
  } else {
    doc["standardizer"] = nullptr;
  }
  return doc;
}

FroccModel model_from_document(const json& doc) {
  const int version = doc.at("format_version").get<int>();
  if (version != kFormatVersion)
    throw VersionError("unsupported model format_version " + std::to_string(version) + " (this build reads " +
                       std::to_string(kFormatVersion) + ")");

  const auto m = doc.at("m").get<Eigen::Index>();
  const auto d = doc.at("d").get<Eigen::Index>();
  const double epsilon = doc.at("epsilon").get<double>();
  const Kernel kernel = kernel_from_json(doc.at("kernel"));
  const Mode mode = parse_mode(doc.at("mode").get<std::string>());
  const Seed seed{doc.at("seed").get<std::uint64_t>()};
  const auto n_train = doc.at("n_train").get<std::size_t>();
  if (m < 1 || d < 1) throw FormatError("model must have m >= 1 and d >= 1");

  const json& dirs = doc.at("directions");
  if (!dirs.is_array() || static_cast<Eigen::Index>(dirs.size()) != m)
    throw FormatError("directions must be an array of m rows");
  ProjectionMatrix<double> directions(m, d);
  for (Eigen::Index i = 0; i < m; ++i) {
    const auto row = dirs[static_cast<std::size_t>(i)].get<std::vector<double>>();
    if (static_cast<Eigen::Index>(row.size()) != d) throw FormatError("direction row has the wrong length");
    for (Eigen::Index k = 0; k < d; ++k) directions(i, k) = row[static_cast<std::size_t>(k)];
  }

  const json& per = doc.at("per_direction");
  if (!per.is_array() || static_cast<Eigen::Index>(per.size()) != m)
    throw FormatError("per_direction must be an array of m entries");
  FroccModel::PerDirection per_direction;
  if (mode == Mode::Exact) {
    FroccModel::IntervalSets sets;
    sets.reserve(static_cast<std::size_t>(m));
    for (const json& entry : per) {
      std::vector<Interval<double>> intervals;
      for (const json& iv : entry.at("intervals")) {
        if (!iv.is_array() || iv.size() != 2) throw FormatError("interval must be a [lo, hi] pair");
        intervals.push_back({iv[0].get<double>(), iv[1].get<double>()});
      }
      sets.push_back(IntervalSet<double>::from_parts(std::move(intervals), entry.at("min_raw").get<double>(),
                                                     entry.at("max_raw").get<double>(), epsilon));
    }
    per_direction = std::move(sets);
  } else {
    FroccModel::BinSets sets;
    sets.reserve(static_cast<std::size_t>(m));
    for (const json& entry : per) {
      sets.push_back(BinSet<double>::from_parts(entry.at("occupied").get<std::vector<bool>>(),
                                                entry.at("min_raw").get<double>(),
                                                entry.at("max_raw").get<double>(), epsilon));
    }
    per_direction = std::move(sets);
  }

  std::optional<Standardizer> standardizer;
  const json& st = doc.at("standardizer");
  if (!st.is_null())
    standardizer = Standardizer{vector_from_json(st.at("mean"), d), vector_from_json(st.at("scale"), d)};

  return FroccModel(std::move(directions), kernel, epsilon, seed, std::move(per_direction),
                    std::move(standardizer), n_train);
}

}  // namespace

std::string to_json_string(const FroccModel& model) {
  json doc = model_document(model);
  doc["checksum"] = hex64(fnv1a64(doc.dump()));
  return doc.dump() + "\n";
}

FroccModel from_json_string(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw FormatError(std::string("malformed model file: ") + e.what());
  }
  if (!doc.is_object()) throw FormatError("malformed model file: not a JSON object");
  try {
    // Version first so that a future document is reported as such even if
    // its layout (and therefore its checksum input) changed.
    if (doc.contains("format_version") && doc["format_version"].is_number_integer() &&
        doc["format_version"].get<int>() != kFormatVersion)
      return model_from_document(doc);
    if (!doc.contains("checksum") || !doc["checksum"].is_string())
      throw FormatError("malformed model file: missing checksum");
    const std::string stored = doc["checksum"].get<std::string>();
    doc.erase("checksum");
    if (hex64(fnv1a64(doc.dump())) != stored) throw ChecksumError("model file checksum mismatch");
    return model_from_document(doc);
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed model file: ") + e.what());
  }
}

void save(const FroccModel& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << to_json_string(model);
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

FroccModel load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_json_string(buf.str());
}

std::string model_hash(const FroccModel& model) { return hex64(fnv1a64(to_json_string(model))); }

}  // namespace frocc
