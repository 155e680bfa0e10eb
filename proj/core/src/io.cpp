#include "hofa/io.hpp"

#include <nlohmann/json.hpp>

#include <fstream>
#include <sstream>

namespace hofa {

namespace {

using nlohmann::json;

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

SampledFunction function_from_json(const std::string& text, const std::string& path) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& ex) {
    throw IOError(path + ": " + ex.what());
  }
  try {
    const json& dom = j.at("domain");
    std::string kind = dom.at("kind").get<std::string>();
    long N = dom.at("N").get<long>();
    DomainSpec d;
    if (kind == "cyclic") {
      d = {DomainKind::Cyclic, N};
    } else if (kind == "interval") {
      d = {DomainKind::Interval, N};
    } else {
      throw IOError(path + ": unknown domain kind '" + kind + "'");
    }
    std::vector<cd> values;
    values.reserve(j.at("values").size());
    for (const json& v : j.at("values")) {
      if (v.is_array() && v.size() == 2) {
        values.emplace_back(v[0].get<double>(), v[1].get<double>());
      } else if (v.is_number()) {
        values.emplace_back(v.get<double>(), 0.0);
      } else {
        throw IOError(path + ": values must be [re,im] pairs or numbers");
      }
    }
    double declared = j.value("bound", 0.0);
    return make_sampled(d, std::move(values), declared);
  } catch (const json::exception& ex) {
    throw IOError(path + ": " + ex.what());
  } catch (const std::invalid_argument& ex) {
    throw IOError(path + ": " + ex.what());
  }
}

SampledFunction function_from_csv(const std::string& text, const std::string& path,
                                  std::optional<DomainKind> kind_hint) {
  std::istringstream in(text);
  std::string line;
  std::vector<std::pair<long, cd>> rows;
  bool first = true;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (first) {
      first = false;
      if (line.find("index") != std::string::npos) continue;  // header row
    }
    std::istringstream ls(line);
    std::string tok;
    std::vector<std::string> parts;
    while (std::getline(ls, tok, ',')) parts.push_back(tok);
    if (parts.size() != 3) throw IOError(path + ":" + std::to_string(lineno) + ": want index,re,im");
    try {
      rows.emplace_back(std::stol(parts[0]), cd{std::stod(parts[1]), std::stod(parts[2])});
    } catch (const std::exception&) {
      throw IOError(path + ":" + std::to_string(lineno) + ": malformed row");
    }
  }
  if (rows.empty()) throw IOError(path + ": no samples");
  long first_index = rows.front().first;
  DomainKind kind = kind_hint.value_or(first_index == 0 ? DomainKind::Cyclic : DomainKind::Interval);
  long base = kind == DomainKind::Cyclic ? 0 : 1;
  std::vector<cd> values(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].first != base + static_cast<long>(i)) {
      throw IOError(path + ": indices must be consecutive starting at " + std::to_string(base));
    }
    values[i] = rows[i].second;
  }
  // The modulus must be read before the vector is moved into the call.
  const long N = static_cast<long>(values.size());
  try {
    return make_sampled({kind, N}, std::move(values));
  } catch (const std::invalid_argument& ex) {
    throw IOError(path + ": " + ex.what());
  }
}

}  // namespace

std::string slurp_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IOError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IOError("read failure on " + path);
  return ss.str();
}

void spit_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IOError("cannot open " + path + " for writing");
  out << content;
  out.flush();
  if (!out) throw IOError("write failure on " + path);
}

SampledFunction read_function(const std::string& path, std::optional<DomainKind> kind_hint) {
  std::string text = slurp_file(path);
  if (ends_with(path, ".csv")) return function_from_csv(text, path, kind_hint);
  if (ends_with(path, ".json")) return function_from_json(text, path);
  throw IOError(path + ": unsupported extension (want .json or .csv)");
}

void write_function(const std::string& path, const SampledFunction& f) {
  if (ends_with(path, ".csv")) {
    std::ostringstream out;
    out << "index,re,im\n";
    out.precision(17);
    for (std::size_t i = 0; i < f.values.size(); ++i) {
      out << f.domain.point(i) << "," << f.values[i].real() << "," << f.values[i].imag() << "\n";
    }
    spit_file(path, out.str());
    return;
  }
  if (ends_with(path, ".json")) {
    nlohmann::ordered_json j;
    j["domain"] = {{"kind", f.domain.kind == DomainKind::Cyclic ? "cyclic" : "interval"}, {"N", f.domain.N}};
    nlohmann::ordered_json vals = nlohmann::ordered_json::array();
    for (const cd& v : f.values) vals.push_back({v.real(), v.imag()});
    j["values"] = std::move(vals);
    j["bound"] = f.bound;
    spit_file(path, j.dump(2) + "\n");
    return;
  }
  throw IOError(path + ": unsupported extension (want .json or .csv)");
}

}  // namespace hofa
