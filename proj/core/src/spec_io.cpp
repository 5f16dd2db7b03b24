#include "lkoethe/spec_io.hpp"

#include <openssl/evp.h>

#include <array>
#include <fstream>
#include <set>
#include <sstream>

#include "lkoethe/errors.hpp"
#include "lkoethe/spec_format.hpp"

namespace lkoethe {

namespace sf = spec_format;

namespace {

void reject_unknown(const sf::Document& doc, std::initializer_list<std::string_view> allowed) {
  const std::set<std::string_view> keys(allowed);
  for (const auto& e : doc.entries()) {
    if (!keys.count(e.key)) throw ParseError(e.value.line, e.key, "unknown field");
  }
}

std::vector<double> number_list(const sf::Value& v, std::string_view field) {
  if (!v.is_array()) throw ParseError(v.line, std::string(field), "expected a list");
  std::vector<double> out;
  for (const auto& item : std::get<sf::Array>(v.data)) {
    if (!item.is_number()) throw ParseError(item.line, std::string(field), "expected numbers");
    out.push_back(std::get<double>(item.data));
  }
  return out;
}

sf::Value number_array(std::span<const double> xs) {
  sf::Array items;
  items.reserve(xs.size());
  for (double x : xs) items.push_back(sf::number(x));
  return sf::array(std::move(items));
}

AlphaRule parse_alpha(const sf::Document& doc) {
  const auto* expr = doc.find("alpha.expr");
  const auto* list = doc.find("alpha.list");
  if (expr && list) throw ParseError(list->line, "alpha.list", "give alpha.expr or alpha.list, not both");
  if (expr) return AlphaFormula{doc.string_field("alpha.expr")};
  if (list) return AlphaList{number_list(*list, "alpha.list")};
  throw ParseError(0, "alpha.expr", "power-series matrices need alpha.expr or alpha.list");
}

void write_alpha(sf::Document& doc, const AlphaRule& alpha) {
  if (const auto* f = std::get_if<AlphaFormula>(&alpha)) {
    doc.set("alpha.expr", sf::string(f->formula));
  } else {
    doc.set("alpha.list", number_array(std::get<AlphaList>(alpha).values));
  }
}

}  // namespace

KoetheMatrixSpec parse_matrix_spec(std::string_view text) {
  const sf::Document doc = sf::parse(text);
  const std::string kind = doc.string_field("kind");
  KoetheMatrixSpec spec;
  spec.levels = doc.index_field("levels");
  spec.dims = doc.index_field("dims");
  if (kind == "explicit") {
    reject_unknown(doc, {"kind", "levels", "dims", "entries"});
    const auto& entries = doc.require("entries");
    if (!entries.is_array()) throw ParseError(entries.line, "entries", "expected a list");
    std::vector<double> flat;
    for (const auto& item : std::get<sf::Array>(entries.data)) {
      if (item.is_array()) {
        const auto row = number_list(item, "entries");
        if (row.size() != spec.dims) {
          throw ParseError(item.line, "entries",
                           "row " + std::to_string(flat.size() / spec.dims + 1) + " has " +
                               std::to_string(row.size()) + " entries, expected " +
                               std::to_string(spec.dims));
        }
        flat.insert(flat.end(), row.begin(), row.end());
      } else if (item.is_number()) {
        flat.push_back(std::get<double>(item.data));
      } else {
        throw ParseError(item.line, "entries", "expected numbers");
      }
    }
    if (flat.size() != spec.levels * spec.dims) {
      throw ParseError(entries.line, "entries",
                       "expected levels*dims = " + std::to_string(spec.levels * spec.dims) +
                           " entries, got " + std::to_string(flat.size()));
    }
    spec.kind = ExplicitGrid{spec.levels, spec.dims, std::move(flat)};
  } else if (kind == "power_series_infinite" || kind == "power_series_finite") {
    reject_unknown(doc, {"kind", "levels", "dims", "alpha.expr", "alpha.list"});
    AlphaRule alpha = parse_alpha(doc);
    if (kind == "power_series_infinite") {
      spec.kind = PowerSeriesInfinite{std::move(alpha)};
    } else {
      spec.kind = PowerSeriesFinite{std::move(alpha)};
    }
  } else if (kind == "expr") {
    reject_unknown(doc, {"kind", "levels", "dims", "expr"});
    spec.kind = LogFormula{doc.string_field("expr")};
  } else {
    throw ParseError(doc.require("kind").line, "kind", "unknown matrix kind '" + kind + "'");
  }
  return spec;
}

std::string serialize_matrix_spec(const KoetheMatrixSpec& spec) {
  sf::Document doc;
  doc.set("kind", sf::string(spec.kind_name()));
  doc.set("levels", sf::number(static_cast<double>(spec.levels)));
  doc.set("dims", sf::number(static_cast<double>(spec.dims)));
  std::visit(
      [&](const auto& kind) {
        using K = std::decay_t<decltype(kind)>;
        if constexpr (std::is_same_v<K, ExplicitGrid>) {
          sf::Array rows;
          for (std::size_t k = 0; k < kind.levels; ++k) {
            rows.push_back(number_array(
                std::span<const double>(kind.log_entries).subspan(k * kind.dims, kind.dims)));
          }
          doc.set("entries", sf::array(std::move(rows)));
        } else if constexpr (std::is_same_v<K, LogFormula>) {
          doc.set("expr", sf::string(kind.formula));
        } else {
          write_alpha(doc, kind.alpha);
        }
      },
      spec.kind);
  return sf::serialize(doc);
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot read '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

KoetheMatrixSpec load_matrix_spec(const std::filesystem::path& path) {
  KoetheMatrixSpec spec = parse_matrix_spec(read_text_file(path));
  (void)KoetheMatrix::build(spec);
  return spec;
}

OperatorRep parse_operator_spec(std::string_view text) {
  const sf::Document doc = sf::parse(text);
  const std::string kind = doc.string_field("kind");
  if (kind == "dense") {
    reject_unknown(doc, {"kind", "domain_dims", "range_dims", "theta"});
    const std::size_t domain = doc.index_field("domain_dims");
    const std::size_t range = doc.index_field("range_dims");
    const auto& theta = doc.require("theta");
    if (!theta.is_array()) throw ParseError(theta.line, "theta", "expected a list of rows");
    const auto& rows = std::get<sf::Array>(theta.data);
    if (rows.size() != domain) {
      throw ParseError(theta.line, "theta",
                       "expected " + std::to_string(domain) + " rows (one per domain index), got " +
                           std::to_string(rows.size()));
    }
    std::vector<double> flat;
    flat.reserve(domain * range);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      const auto row = number_list(rows[r], "theta");
      if (row.size() != range) {
        throw ParseError(rows[r].line, "theta",
                         "row " + std::to_string(r + 1) + " has " + std::to_string(row.size()) +
                             " entries, expected range_dims = " + std::to_string(range));
      }
      flat.insert(flat.end(), row.begin(), row.end());
    }
    return DenseOperator(domain, range, std::move(flat));
  }
  if (kind == "rank_one") {
    reject_unknown(doc, {"kind", "i", "v", "scale"});
    const double scale = doc.find("scale") ? doc.number_field("scale") : 1.0;
    return RankOneOperator(doc.index_field("i"), doc.index_field("v"), scale);
  }
  if (kind == "quasi_diagonal") {
    reject_unknown(doc, {"kind", "pairs"});
    const auto& pairs = doc.require("pairs");
    if (!pairs.is_array()) throw ParseError(pairs.line, "pairs", "expected a list");
    std::vector<QuasiDiagonalEntry> entries;
    for (const auto& item : std::get<sf::Array>(pairs.data)) {
      if (!item.is_array() || std::get<sf::Array>(item.data).size() != 3) {
        throw ParseError(item.line, "pairs", "each pair is [n, sigma, m]");
      }
      const auto& t = std::get<sf::Array>(item.data);
      if (!t[2].is_number()) throw ParseError(item.line, "pairs", "m must be a number");
      entries.push_back({sf::to_index(t[0], "pairs"), sf::to_index(t[1], "pairs"),
                         std::get<double>(t[2].data)});
    }
    return QuasiDiagonalOperator(std::move(entries));
  }
  throw ParseError(doc.require("kind").line, "kind", "unknown operator kind '" + kind + "'");
}

std::string serialize_operator_spec(const OperatorRep& op) {
  sf::Document doc;
  doc.set("kind", sf::string(kind_name(op)));
  if (const auto* dense = std::get_if<DenseOperator>(&op)) {
    doc.set("domain_dims", sf::number(static_cast<double>(dense->domain_dim())));
    doc.set("range_dims", sf::number(static_cast<double>(dense->range_dim())));
    sf::Array rows;
    for (std::size_t n = 1; n <= dense->domain_dim(); ++n) rows.push_back(number_array(dense->image(n)));
    doc.set("theta", sf::array(std::move(rows)));
  } else if (const auto* r1 = std::get_if<RankOneOperator>(&op)) {
    doc.set("i", sf::number(static_cast<double>(r1->i)));
    doc.set("v", sf::number(static_cast<double>(r1->v)));
    doc.set("scale", sf::number(r1->scale));
  } else {
    sf::Array pairs;
    for (const auto& e : std::get<QuasiDiagonalOperator>(op).entries()) {
      pairs.push_back(sf::array({sf::number(static_cast<double>(e.n)),
                                 sf::number(static_cast<double>(e.sigma)), sf::number(e.m)}));
    }
    doc.set("pairs", sf::array(std::move(pairs)));
  }
  return sf::serialize(doc);
}

OperatorRep load_operator_spec(const std::filesystem::path& path) {
  return parse_operator_spec(read_text_file(path));
}

std::string sha256_hex(std::string_view data) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md.data(), &len, EVP_sha256(), nullptr) != 1) {
    throw Error("sha256 failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(kHex[md[i] >> 4]);
    out.push_back(kHex[md[i] & 0xf]);
  }
  return out;
}

std::string spec_digest(const KoetheMatrixSpec& spec) {
  return sha256_hex(serialize_matrix_spec(spec));
}

std::string spec_digest(const OperatorRep& op) { return sha256_hex(serialize_operator_spec(op)); }

}  // namespace lkoethe
