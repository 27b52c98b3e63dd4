#include "drinv/catalog.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <sstream>
#include <string>

#include "drinv/error.hpp"

namespace drinv {
namespace {

const char* const kCatalogHeader =
    "id,unit_volume,unit_weight,shelf_life,demand_mean,season_amp,season_period,phase,noise_sd";

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::string strip(std::string s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == ' ')) s.pop_back();
  std::size_t start = 0;
  while (start < s.size() && s[start] == ' ') ++start;
  // UTF-8 byte order mark
  if (s.compare(start, 3, "\xEF\xBB\xBF") == 0) start += 3;
  return s.substr(start);
}

std::string where(const std::filesystem::path& path, std::size_t row, const std::string& column) {
  std::ostringstream os;
  os << path.string() << ": row " << row << ", column '" << column << "'";
  return os.str();
}

double parse_real(const std::string& text, const std::filesystem::path& path, std::size_t row,
                  const std::string& column) {
  try {
    std::size_t used = 0;
    double value = std::stod(text, &used);
    if (used != text.size() || !std::isfinite(value)) throw std::invalid_argument(text);
    return value;
  } catch (const std::exception&) {
    throw ParseError(where(path, row, column) + ": expected a real number, got '" + text + "'");
  }
}

long parse_int(const std::string& text, const std::filesystem::path& path, std::size_t row,
               const std::string& column) {
  try {
    std::size_t used = 0;
    long value = std::stol(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return value;
  } catch (const std::exception&) {
    throw ParseError(where(path, row, column) + ": expected an integer, got '" + text + "'");
  }
}

std::ifstream open(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path.string() + ": cannot open file");
  return in;
}

}  // namespace

void validate(const Product& p) {
  if (!(p.unit_volume > 0.0) || !std::isfinite(p.unit_volume))
    throw ContractViolation("product " + std::to_string(p.id) + ": unit_volume must be > 0");
  if (!(p.unit_weight > 0.0) || !std::isfinite(p.unit_weight))
    throw ContractViolation("product " + std::to_string(p.id) + ": unit_weight must be > 0");
  if (p.shelf_life < 1)
    throw ContractViolation("product " + std::to_string(p.id) + ": shelf_life must be >= 1");
  if (!(p.demand_mean >= 0.0) || !std::isfinite(p.demand_mean))
    throw ContractViolation("product " + std::to_string(p.id) + ": demand_mean must be >= 0");
  if (!(p.demand_season_amp >= 0.0 && p.demand_season_amp < 1.0))
    throw ContractViolation("product " + std::to_string(p.id) + ": season_amp must be in [0,1)");
  if (p.demand_season_period < 1)
    throw ContractViolation("product " + std::to_string(p.id) + ": season_period must be >= 1");
  if (!std::isfinite(p.demand_phase))
    throw ContractViolation("product " + std::to_string(p.id) + ": phase must be finite");
  if (!(p.demand_noise_sd >= 0.0) || !std::isfinite(p.demand_noise_sd))
    throw ContractViolation("product " + std::to_string(p.id) + ": noise_sd must be >= 0");
}

Catalog make_synthetic_catalog(int n, Rng& rng) {
  require(n >= 1, "make_synthetic_catalog: product count must be >= 1");
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> period_pick(1, 3);
  std::uniform_int_distribution<int> shelf(3, 15);
  Catalog catalog;
  catalog.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    Product p;
    p.id = i;
    p.demand_mean = 2.0 + 18.0 * unit(rng);
    p.demand_season_amp = 0.5 * unit(rng);
    p.demand_season_period = 10 * period_pick(rng);
    p.demand_phase = 2.0 * std::numbers::pi * unit(rng);
    p.demand_noise_sd = 0.3 * p.demand_mean * unit(rng);
    p.unit_volume = 0.2 + 1.8 * unit(rng);
    p.unit_weight = 0.1 + 0.9 * unit(rng);
    p.shelf_life = shelf(rng);
    catalog.push_back(p);
  }
  return catalog;
}

Catalog load_catalog(const std::filesystem::path& path) {
  auto in = open(path);
  std::string line;
  if (!std::getline(in, line) || strip(line).empty()) throw ParseError(path.string() + ": empty catalog");
  if (strip(line) != kCatalogHeader)
    throw ParseError(path.string() + ": bad header, expected '" + std::string(kCatalogHeader) + "'");

  const auto columns = split_csv(kCatalogHeader);
  Catalog catalog;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    line = strip(line);
    if (line.empty()) continue;
    ++row;
    auto fields = split_csv(line);
    if (fields.size() != columns.size()) {
      throw ParseError(path.string() + ": row " + std::to_string(row) + ": expected " +
                       std::to_string(columns.size()) + " fields, got " +
                       std::to_string(fields.size()));
    }
    for (auto& f : fields) f = strip(f);
    Product p;
    p.id = static_cast<int>(parse_int(fields[0], path, row, columns[0]));
    p.unit_volume = parse_real(fields[1], path, row, columns[1]);
    p.unit_weight = parse_real(fields[2], path, row, columns[2]);
    p.shelf_life = static_cast<int>(parse_int(fields[3], path, row, columns[3]));
    p.demand_mean = parse_real(fields[4], path, row, columns[4]);
    p.demand_season_amp = parse_real(fields[5], path, row, columns[5]);
    p.demand_season_period = static_cast<int>(parse_int(fields[6], path, row, columns[6]));
    p.demand_phase = parse_real(fields[7], path, row, columns[7]);
    p.demand_noise_sd = parse_real(fields[8], path, row, columns[8]);
    try {
      validate(p);
    } catch (const ContractViolation& e) {
      throw ParseError(path.string() + ": row " + std::to_string(row) + ": " + e.what());
    }
    catalog.push_back(p);
  }
  if (catalog.empty()) throw ParseError(path.string() + ": empty catalog");
  return catalog;
}

void save_catalog(const Catalog& catalog, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError(path.string() + ": cannot open for writing");
  out << kCatalogHeader << '\n' << std::setprecision(17);
  for (const auto& p : catalog) {
    out << p.id << ',' << p.unit_volume << ',' << p.unit_weight << ',' << p.shelf_life << ','
        << p.demand_mean << ',' << p.demand_season_amp << ',' << p.demand_season_period << ','
        << p.demand_phase << ',' << p.demand_noise_sd << '\n';
  }
}

DemandSeries load_demand_series(const std::filesystem::path& path) {
  auto in = open(path);
  std::string line;
  if (!std::getline(in, line) || strip(line).empty()) throw ParseError(path.string() + ": empty demand series");
  auto header = split_csv(strip(line));
  for (auto& h : header) h = strip(h);
  if (header.size() < 2 || header[0] != "t")
    throw ParseError(path.string() + ": header must be 't,<id0>,<id1>,...'");

  DemandSeries series;
  std::vector<int> demand_col, forecast_col;  // header index per product
  std::vector<int> forecast_ids;
  for (std::size_t c = 1; c < header.size(); ++c) {
    const bool is_forecast = !header[c].empty() && header[c][0] == 'f';
    const auto id_text = is_forecast ? header[c].substr(1) : header[c];
    const auto id = static_cast<int>(parse_int(id_text, path, 0, header[c]));
    if (is_forecast) {
      forecast_ids.push_back(id);
      forecast_col.push_back(static_cast<int>(c));
    } else {
      series.product_ids.push_back(id);
      demand_col.push_back(static_cast<int>(c));
    }
  }
  if (series.product_ids.empty()) throw ParseError(path.string() + ": no demand columns");
  std::vector<int> forecast_for(series.product_ids.size(), -1);
  if (!forecast_ids.empty()) {
    for (std::size_t j = 0; j < series.product_ids.size(); ++j) {
      for (std::size_t f = 0; f < forecast_ids.size(); ++f)
        if (forecast_ids[f] == series.product_ids[j]) forecast_for[j] = forecast_col[f];
      if (forecast_for[j] < 0)
        throw ParseError(path.string() + ": missing forecast column f" +
                         std::to_string(series.product_ids[j]));
    }
  }

  std::size_t row = 0;
  while (std::getline(in, line)) {
    line = strip(line);
    if (line.empty()) continue;
    ++row;
    auto fields = split_csv(line);
    if (fields.size() != header.size())
      throw ParseError(path.string() + ": row " + std::to_string(row) + ": expected " +
                       std::to_string(header.size()) + " fields, got " +
                       std::to_string(fields.size()));
    for (auto& f : fields) f = strip(f);
    const auto t = parse_int(fields[0], path, row, "t");
    if (t != static_cast<long>(row - 1))
      throw ParseError(where(path, row, "t") + ": steps must be consecutive from 0");
    std::vector<int> d;
    for (std::size_t j = 0; j < demand_col.size(); ++j) {
      const auto c = static_cast<std::size_t>(demand_col[j]);
      const auto v = parse_int(fields[c], path, row, header[c]);
      if (v < 0) throw ParseError(where(path, row, header[c]) + ": demand must be >= 0");
      d.push_back(static_cast<int>(v));
    }
    series.demand.push_back(std::move(d));
    if (!forecast_ids.empty()) {
      std::vector<double> f;
      for (std::size_t j = 0; j < demand_col.size(); ++j) {
        const auto c = static_cast<std::size_t>(forecast_for[j]);
        const auto v = parse_real(fields[c], path, row, header[c]);
        if (v < 0.0) throw ParseError(where(path, row, header[c]) + ": forecast must be >= 0");
        f.push_back(v);
      }
      series.forecast.push_back(std::move(f));
    }
  }
  if (series.demand.empty()) throw ParseError(path.string() + ": empty demand series");
  return series;
}

}  // namespace drinv
