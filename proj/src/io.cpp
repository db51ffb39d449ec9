#include "hedmatch/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "hedmatch/error.hpp"

namespace hedmatch {
namespace {

using Json = nlohmann::ordered_json;

[[noreturn]] void parse_error(const std::string& what) {
  throw Error(ErrorKind::kParse, "instance: " + what);
}

const Json& field(const Json& obj, const char* key, const std::string& where) {
  if (!obj.is_object()) parse_error(where + " is not an object");
  auto it = obj.find(key);
  if (it == obj.end()) parse_error(where + " lacks \"" + key + "\"");
  return *it;
}

double number(const Json& j, const std::string& where) {
  if (!j.is_number()) parse_error(where + " is not a number");
  return j.get<double>();
}

// Points are arrays of coordinates; a bare number is a 1D point.
SpaceGrid parse_grid(const Json& side, const std::string& name) {
  const Json& pts = field(side, "points", name);
  if (!pts.is_array()) parse_error(name + ".points is not an array");
  SpaceGrid grid;
  grid.dim = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const std::string where = name + ".points[" + std::to_string(i) + "]";
    Point p;
    if (pts[i].is_array()) {
      for (const auto& c : pts[i]) p.push_back(number(c, where));
    } else {
      p.push_back(number(pts[i], where));
    }
    if (i == 0) grid.dim = p.size();
    grid.points.push_back(std::move(p));
  }
  if (grid.points.empty()) grid.dim = 1;
  return grid;
}

DiscreteMeasure parse_weights(const Json& side, const std::string& name) {
  const Json& w = field(side, "weights", name);
  if (!w.is_array()) parse_error(name + ".weights is not an array");
  std::vector<double> weights;
  for (std::size_t i = 0; i < w.size(); ++i) {
    weights.push_back(number(w[i], name + ".weights[" + std::to_string(i) + "]"));
  }
  return DiscreteMeasure::from_weights(std::move(weights));
}

int parse_sign(const Json& spec, const std::string& name) {
  auto it = spec.find("sign");
  if (it == spec.end()) return 1;
  const double s = number(*it, name + ".sign");
  if (s != 1.0 && s != -1.0) parse_error(name + ".sign must be +1 or -1");
  return static_cast<int>(s);
}

CostSpec parse_cost(const Json& spec, const std::string& name) {
  const Json& fam = field(spec, "family", name);
  if (!fam.is_string()) parse_error(name + ".family is not a string");
  const std::string family = fam.get<std::string>();
  const int sign = parse_sign(spec, name);
  if (family == "bilinear") return CostSpec::bilinear(sign);
  if (family == "scaled_quadratic") {
    return CostSpec::scaled_quadratic(sign, number(field(spec, "alpha", name), name + ".alpha"));
  }
  if (family == "power") {
    return CostSpec::power(sign, number(field(spec, "alpha", name), name + ".alpha"));
  }
  if (family == "table") {
    const Json& rows = field(spec, "values", name);
    if (!rows.is_array()) parse_error(name + ".values is not an array");
    std::vector<std::vector<double>> values;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const std::string where = name + ".values[" + std::to_string(i) + "]";
      if (!rows[i].is_array()) parse_error(where + " is not an array");
      std::vector<double> row;
      for (const auto& c : rows[i]) row.push_back(number(c, where));
      if (!values.empty() && row.size() != values.front().size()) {
        parse_error(name + ".values is ragged");
      }
      values.push_back(std::move(row));
    }
    CostSpec c = CostSpec::tabulated(Matrix::from_rows(values));
    c.sign = sign;
    return c;
  }
  parse_error(name + ".family \"" + family + "\" is unknown");
}

// Emits numbers through format_double so files are byte-stable.
class Writer {
 public:
  std::string str() const { return os_.str(); }

  void grid(const char* name, const SpaceGrid& g, const DiscreteMeasure* m) {
    os_ << "  \"" << name << "\": {\n    \"points\": [";
    for (std::size_t i = 0; i < g.size(); ++i) {
      os_ << (i ? ", " : "") << '[';
      for (std::size_t c = 0; c < g[i].size(); ++c) os_ << (c ? ", " : "") << format_double(g[i][c]);
      os_ << ']';
    }
    os_ << ']';
    if (m) {
      os_ << ",\n    \"weights\": [";
      for (std::size_t i = 0; i < m->size(); ++i) os_ << (i ? ", " : "") << format_double((*m)[i]);
      os_ << ']';
    }
    os_ << "\n  },\n";
  }

  void cost(const char* name, const CostSpec& c, bool last) {
    os_ << "  \"" << name << "\": {\"family\": \"" << to_string(c.family) << "\", \"sign\": "
        << c.sign;
    if (c.family == CostFamily::kTable) {
      os_ << ", \"values\": [";
      for (std::size_t r = 0; r < c.table.rows(); ++r) {
        os_ << (r ? ", " : "") << '[';
        for (std::size_t k = 0; k < c.table.cols(); ++k) {
          os_ << (k ? ", " : "") << format_double(c.table(r, k));
        }
        os_ << ']';
      }
      os_ << ']';
    } else if (c.family != CostFamily::kBilinear) {
      os_ << ", \"alpha\": " << format_double(c.alpha);
    }
    os_ << '}' << (last ? "\n" : ",\n");
  }

  std::ostringstream& raw() { return os_; }

 private:
  std::ostringstream os_;
};

}  // namespace

Instance parse_instance(const std::string& text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::exception& e) {
    parse_error(e.what());
  }
  Instance inst;
  const Json& x = field(doc, "x", "document");
  const Json& y = field(doc, "y", "document");
  inst.x_grid = parse_grid(x, "x");
  inst.mu = parse_weights(x, "x");
  inst.y_grid = parse_grid(y, "y");
  inst.nu = parse_weights(y, "y");
  inst.z_grid = parse_grid(field(doc, "z", "document"), "z");
  inst.u_cost = parse_cost(field(doc, "u", "document"), "u");
  inst.v_cost = parse_cost(field(doc, "v", "document"), "v");
  return inst;
}

Instance load_instance(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kParse, "cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_instance(buf.str());
}

std::string instance_to_json(const Instance& inst) {
  Writer w;
  w.raw() << "{\n";
  w.grid("x", inst.x_grid, &inst.mu);
  w.grid("y", inst.y_grid, &inst.nu);
  w.grid("z", inst.z_grid, nullptr);
  w.cost("u", inst.u_cost, false);
  w.cost("v", inst.v_cost, true);
  w.raw() << "}\n";
  return w.str();
}

void save_instance(const std::filesystem::path& path, const Instance& inst) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::kParse, "cannot write " + path.string());
  out << instance_to_json(inst);
}

std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

}  // namespace hedmatch
