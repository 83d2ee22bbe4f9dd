#include "pacok/io.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "pacok/errors.hpp"

namespace pacok {

std::string_view to_string(InitialKind kind) {
  switch (kind) {
    case InitialKind::TanhDisk: return "disk";
    case InitialKind::RandomPiecewise: return "random";
    case InitialKind::Solvation: return "solvation";
    case InitialKind::Constant: return "constant";
  }
  return "?";
}

InitialKind parse_initial_kind(std::string_view name) {
  if (name == "disk") return InitialKind::TanhDisk;
  if (name == "random") return InitialKind::RandomPiecewise;
  if (name == "solvation") return InitialKind::Solvation;
  if (name == "constant") return InitialKind::Constant;
  throw ConfigError("unknown initial '" + std::string(name) +
                    "' (expected disk|random|solvation|constant)");
}

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::string_view unquote(std::string_view s) {
  if (s.size() >= 2 && (s.front() == '"' || s.front() == '\'') && s.back() == s.front()) {
    return s.substr(1, s.size() - 2);
  }
  return s;
}

double parse_real(std::string_view key, std::string_view text) {
  text = trim(text);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(v)) {
    throw ConfigError(std::string(key) + ": expected a real number, got '" + std::string(text) + "'");
  }
  return v;
}

template <class Int>
Int parse_integer(std::string_view key, std::string_view text) {
  text = trim(text);
  Int v{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ConfigError(std::string(key) + ": expected an integer, got '" + std::string(text) + "'");
  }
  return v;
}

bool parse_bool(std::string_view key, std::string_view text) {
  if (text == "true" || text == "1") return true;
  if (text == "false" || text == "0") return false;
  throw ConfigError(std::string(key) + ": expected true|false, got '" + std::string(text) + "'");
}

std::vector<double> parse_list(std::string_view key, std::string_view text) {
  text = trim(text);
  if (!text.empty() && text.front() == '[') {
    if (text.back() != ']') throw ConfigError(std::string(key) + ": unterminated list");
    text = trim(text.substr(1, text.size() - 2));
  }
  std::vector<double> out;
  while (!text.empty()) {
    const auto comma = text.find(',');
    out.push_back(parse_real(key, text.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    text = trim(text.substr(comma + 1));
    if (text.empty()) throw ConfigError(std::string(key) + ": trailing comma in list");
  }
  return out;
}

void require(bool ok, std::string_view key, const char* what, double got) {
  if (ok) return;
  char buf[200];
  std::snprintf(buf, sizeof buf, "%.*s %s, got %.17g", static_cast<int>(key.size()), key.data(),
                what, got);
  throw ConfigError(buf);
}

void set_key(RunConfig& c, std::string_view key, std::string_view raw) {
  const std::string_view value = unquote(trim(raw));
  ModelParams& p = c.params;
  if (key == "epsilon") {
    if (!value.empty() && value.back() == 'h') {
      const double cells = parse_real(key, value.substr(0, value.size() - 1));
      require(cells > 0.0, key, "must be > 0", cells);
      c.epsilon_cells = cells;
      p.epsilon = ModelParams{}.epsilon;
    } else {
      p.epsilon = parse_real(key, value);
      require(p.epsilon > 0.0, key, "must be > 0", p.epsilon);
      c.epsilon_cells.reset();
    }
  } else if (key == "gamma") {
    p.gamma = parse_real(key, value);
    require(p.gamma >= 0.0, key, "must be >= 0", p.gamma);
  } else if (key == "M") {
    p.penalty = parse_real(key, value);
    require(p.penalty >= 0.0, key, "must be >= 0", p.penalty);
  } else if (key == "omega") {
    p.omega = parse_real(key, value);
    require(p.omega > 0.0 && p.omega < 1.0, key, "must be in (0, 1)", p.omega);
  } else if (key == "kappa") {
    p.kappa = parse_real(key, value);
    require(p.kappa >= 0.0, key, "must be >= 0", p.kappa);
  } else if (key == "tau") {
    p.tau = parse_real(key, value);
    require(p.tau > 0.0, key, "must be > 0", p.tau);
  } else if (key == "dim") {
    c.dim = parse_integer<int>(key, value);
    require(c.dim == 1 || c.dim == 2, key, "must be 1 or 2", c.dim);
  } else if (key == "N") {
    c.n = parse_integer<int>(key, value);
    require(c.n >= 4 && c.n % 2 == 0, key, "must be even and >= 4", c.n);
  } else if (key == "X") {
    c.half_extent = parse_real(key, value);
    require(c.half_extent > 0.0, key, "must be > 0", c.half_extent);
  } else if (key == "operator") {
    c.op = parse_operator_kind(value);
  } else if (key == "helmholtz_length") {
    c.helmholtz_length = parse_real(key, value);
    require(c.helmholtz_length >= 0.0, key, "must be >= 0", c.helmholtz_length);
  } else if (key == "garnet_delta") {
    c.garnet_delta = parse_real(key, value);
    require(c.garnet_delta > 0.0, key, "must be > 0", c.garnet_delta);
  } else if (key == "symbol_file") {
    c.symbol_file = std::string(value);
  } else if (key == "f") {
    c.f = parse_nonlinearity(value);
  } else if (key == "extension") {
    c.extension = parse_bool(key, value);
  } else if (key == "pvism.solutes") {
    c.solutes = parse_list(key, value);
  } else if (key == "init") {
    c.initial = parse_initial_kind(value);
  } else if (key == "init_lo") {
    c.init_lo = parse_real(key, value);
  } else if (key == "init_hi") {
    c.init_hi = parse_real(key, value);
  } else if (key == "blocks") {
    c.blocks = parse_integer<int>(key, value);
    require(c.blocks >= 1, key, "must be >= 1", c.blocks);
  } else if (key == "init_value") {
    c.init_value = parse_real(key, value);
  } else if (key == "T") {
    c.t_max = parse_real(key, value);
    require(c.t_max > 0.0, key, "must be > 0", c.t_max);
  } else if (key == "tol") {
    c.tol = parse_real(key, value);
  } else if (key == "seed") {
    c.seed = parse_integer<std::uint64_t>(key, value);
  } else if (key == "out") {
    c.out_dir = std::string(value);
  } else if (key == "snapshot_times") {
    c.snapshot_times = parse_list(key, value);
  } else if (key == "monitor_stride") {
    c.monitor_stride = parse_integer<long>(key, value);
    require(c.monitor_stride >= 1, key, "must be >= 1", static_cast<double>(c.monitor_stride));
  } else if (key == "record_stride") {
    c.record_stride = parse_integer<long>(key, value);
    require(c.record_stride >= 1, key, "must be >= 1", static_cast<double>(c.record_stride));
  } else if (key == "scale") {
    c.scale = parse_scale(value);
  } else {
    throw ConfigError("unknown key '" + std::string(key) + "'");
  }
}

std::pair<std::string_view, std::string_view> split_assignment(std::string_view line) {
  const auto eq = line.find('=');
  if (eq == std::string_view::npos) throw ConfigError("expected 'key = value'");
  const std::string_view key = trim(line.substr(0, eq));
  if (key.empty()) throw ConfigError("missing key before '='");
  return {key, trim(line.substr(eq + 1))};
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt_list(const std::vector<double>& xs) {
  std::string s = "[";
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) s += ", ";
    s += fmt(xs[i]);
  }
  return s + "]";
}

}  // namespace

void validate(const RunConfig& c) {
  c.params.validate();
  if (c.init_lo > c.init_hi) throw ConfigError("init_lo must not exceed init_hi");
  if (c.n % c.blocks != 0 && c.initial == InitialKind::RandomPiecewise) {
    throw ConfigError("blocks=" + std::to_string(c.blocks) + " does not divide N=" +
                      std::to_string(c.n));
  }
  if (!c.solutes.empty() && c.dim != 1) throw ConfigError("pvism.solutes requires dim = 1");
  if (c.op == OperatorKind::CustomSymbol && c.symbol_file.empty() && c.solutes.empty()) {
    throw ConfigError("operator = custom requires symbol_file");
  }
  if (c.initial == InitialKind::TanhDisk && c.dim != 2) {
    throw ConfigError("init = disk requires dim = 2");
  }
  if (c.initial == InitialKind::Solvation && c.dim != 1) {
    throw ConfigError("init = solvation requires dim = 1");
  }
}

RunConfig parse_config(std::string_view text) {
  RunConfig c;
  int line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    try {
      const auto [key, value] = split_assignment(line);
      set_key(c, key, value);
    } catch (const std::exception& e) {
      throw ConfigError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  validate(c);
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  return parse_config(read_text_file(path));
}

void apply_override(RunConfig& config, std::string_view assignment) {
  try {
    const auto [key, value] = split_assignment(assignment);
    set_key(config, key, value);
  } catch (const std::exception& e) {
    throw ConfigError("--set '" + std::string(assignment) + "': " + e.what());
  }
}

std::string to_config_text(const RunConfig& c) {
  std::ostringstream out;
  const auto put = [&](const char* key, const std::string& value) {
    out << key << " = " << value << '\n';
  };
  put("epsilon", c.epsilon_cells ? fmt(*c.epsilon_cells) + "h" : fmt(c.params.epsilon));
  put("gamma", fmt(c.params.gamma));
  put("M", fmt(c.params.penalty));
  put("omega", fmt(c.params.omega));
  put("kappa", fmt(c.params.kappa));
  put("tau", fmt(c.params.tau));
  put("dim", std::to_string(c.dim));
  put("N", std::to_string(c.n));
  put("X", fmt(c.half_extent));
  put("operator", std::string(to_string(c.op)));
  put("helmholtz_length", fmt(c.helmholtz_length));
  put("garnet_delta", fmt(c.garnet_delta));
  put("symbol_file", "\"" + c.symbol_file + "\"");
  put("f", std::string(to_string(c.f)));
  put("extension", c.extension ? "true" : "false");
  put("pvism.solutes", fmt_list(c.solutes));
  put("init", std::string(to_string(c.initial)));
  put("init_lo", fmt(c.init_lo));
  put("init_hi", fmt(c.init_hi));
  put("blocks", std::to_string(c.blocks));
  put("init_value", fmt(c.init_value));
  put("T", fmt(c.t_max));
  put("tol", fmt(c.tol));
  put("seed", std::to_string(c.seed));
  put("out", "\"" + c.out_dir + "\"");
  put("snapshot_times", fmt_list(c.snapshot_times));
  put("monitor_stride", std::to_string(c.monitor_stride));
  put("record_stride", std::to_string(c.record_stride));
  put("scale", std::string(to_string(c.scale)));
  return out.str();
}

PeriodicGrid make_grid(const RunConfig& c) {
  return c.dim == 1 ? PeriodicGrid::line(c.n, c.half_extent)
                    : PeriodicGrid::square(c.n, c.half_extent);
}

Model make_model(const RunConfig& c) {
  const PeriodicGrid grid = make_grid(c);
  Model m;
  m.params = c.params;
  if (c.epsilon_cells) m.params.epsilon = *c.epsilon_cells * grid.spacing(0);
  m.nonlinearity = {c.f, c.extension};
  if (!c.solutes.empty()) {
    m.op = LongRangeOp::none();
    m.potential = pvism_potential(grid, c.solutes);
  } else {
    switch (c.op) {
      case OperatorKind::None: m.op = LongRangeOp::none(); break;
      case OperatorKind::InverseLaplacian: m.op = LongRangeOp::inverse_laplacian(); break;
      case OperatorKind::Helmholtz: m.op = LongRangeOp::helmholtz(c.helmholtz_length); break;
      case OperatorKind::GarnetFilm: m.op = LongRangeOp::garnet_film(c.garnet_delta); break;
      case OperatorKind::CustomSymbol:
        m.op = LongRangeOp::custom(load_symbol_table(c.symbol_file, c.dim));
        break;
    }
  }
  m.validate(grid);
  return m;
}

GridField make_initial(const RunConfig& c) {
  const PeriodicGrid grid = make_grid(c);
  const double eps = c.epsilon_cells ? *c.epsilon_cells * grid.spacing(0) : c.params.epsilon;
  switch (c.initial) {
    case InitialKind::TanhDisk: return initial_tanh_disk(grid, c.params.omega, eps);
    case InitialKind::RandomPiecewise:
      return initial_random_piecewise(grid, c.init_lo, c.init_hi, c.blocks, c.seed);
    case InitialKind::Solvation:
      return initial_solvation_profile(grid, eps, SolvationConstants{}.cutoff);
    case InitialKind::Constant: return GridField(grid, c.init_value);
  }
  throw ConfigError("unknown initial condition");
}

RunOptions make_run_options(const RunConfig& c) {
  RunOptions o;
  o.t_max = c.t_max;
  o.tol = c.tol;
  o.record_stride = c.record_stride;
  o.monitor_stride = c.monitor_stride;
  return o;
}

// ---------------------------------------------------------------------------

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot write '" + path.string() + "'");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw ConfigError("write failed for '" + path.string() + "'");
}

namespace {

std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> out;
  while (true) {
    const auto comma = line.find(',');
    out.push_back(trim(line.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    line = line.substr(comma + 1);
  }
  return out;
}

template <class Fn>
void for_each_line(std::string_view text, Fn&& fn) {
  int line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    const std::string_view line = trim(text.substr(0, nl));
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (line.empty()) continue;
    try {
      fn(line_no, line);
    } catch (const ConfigError& e) {
      throw ConfigError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
}

}  // namespace

std::string format_series(const std::vector<StepRecord>& records) {
  std::string out = "n,t,min,max,energy,increment\n";
  char buf[200];
  for (const StepRecord& r : records) {
    std::snprintf(buf, sizeof buf, "%ld,%.17g,%.17g,%.17g,%.17g,%.17g\n", r.n, r.t, r.min, r.max,
                  r.energy, r.increment);
    out += buf;
  }
  return out;
}

std::vector<StepRecord> parse_series(std::string_view text) {
  std::vector<StepRecord> records;
  bool header = false;
  for_each_line(text, [&](int, std::string_view line) {
    if (!header) {
      if (line != "n,t,min,max,energy,increment") throw ConfigError("bad series header");
      header = true;
      return;
    }
    const auto cells = split_commas(line);
    if (cells.size() != 6) throw ConfigError("expected 6 columns");
    records.push_back({parse_integer<long>("n", cells[0]), parse_real("t", cells[1]),
                       parse_real("min", cells[2]), parse_real("max", cells[3]),
                       parse_real("energy", cells[4]), parse_real("increment", cells[5])});
  });
  if (!header) throw ConfigError("missing series header");
  return records;
}

void write_series(const std::filesystem::path& path, const std::vector<StepRecord>& records) {
  write_text_file(path, format_series(records));
}

std::vector<StepRecord> read_series(const std::filesystem::path& path) {
  return parse_series(read_text_file(path));
}

std::string format_snapshot(const GridField& phi, double time) {
  const PeriodicGrid& g = phi.grid();
  std::string out = "# pacok-grid v1 dim=" + std::to_string(g.dim()) + " N=" + std::to_string(g.size(0));
  if (g.dim() == 2) out += "," + std::to_string(g.size(1));
  out += " X=" + fmt(g.half_extent(0));
  if (g.dim() == 2) out += "," + fmt(g.half_extent(1));
  out += " t=" + fmt(time) + "\n";
  char buf[40];
  for (double v : phi.values()) {
    std::snprintf(buf, sizeof buf, "%.17g\n", v);
    out += buf;
  }
  return out;
}

LoadedSnapshot parse_snapshot(std::string_view text) {
  const auto nl = text.find('\n');
  std::string_view header = trim(text.substr(0, nl));
  const std::string_view magic = "# pacok-grid v1";
  if (header.substr(0, magic.size()) != magic) throw ConfigError("snapshot: bad header");
  header = trim(header.substr(magic.size()));

  int dim = 0;
  std::vector<double> sizes;
  std::vector<double> extents;
  std::optional<double> time;
  while (!header.empty()) {
    const auto sp = header.find(' ');
    const std::string_view tok = header.substr(0, sp);
    header = sp == std::string_view::npos ? std::string_view{} : trim(header.substr(sp + 1));
    const auto eq = tok.find('=');
    if (eq == std::string_view::npos) throw ConfigError("snapshot: bad header field");
    const std::string_view k = tok.substr(0, eq);
    const std::string_view v = tok.substr(eq + 1);
    if (k == "dim") dim = parse_integer<int>(k, v);
    else if (k == "N") sizes = parse_list(k, v);
    else if (k == "X") extents = parse_list(k, v);
    else if (k == "t") time = parse_real(k, v);
    else throw ConfigError("snapshot: unknown header field '" + std::string(k) + "'");
  }
  if ((dim != 1 && dim != 2) || sizes.size() != static_cast<std::size_t>(dim) ||
      extents.size() != static_cast<std::size_t>(dim) || !time) {
    throw ConfigError("snapshot: incomplete header");
  }
  std::vector<int> n;
  for (double s : sizes) n.push_back(static_cast<int>(s));
  PeriodicGrid grid(n, extents);

  std::vector<double> values;
  values.reserve(grid.num_cells());
  const std::string_view body = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
  for_each_line(body, [&](int, std::string_view line) { values.push_back(parse_real("value", line)); });
  if (values.size() != grid.num_cells()) {
    throw ConfigError("snapshot: expected " + std::to_string(grid.num_cells()) + " values, got " +
                      std::to_string(values.size()));
  }
  return {GridField(grid, std::move(values)), *time};
}

void write_snapshot(const std::filesystem::path& path, const GridField& phi, double time) {
  write_text_file(path, format_snapshot(phi, time));
}

LoadedSnapshot read_snapshot(const std::filesystem::path& path) {
  return parse_snapshot(read_text_file(path));
}

SymbolTable parse_symbol_table(std::string_view text, int dim) {
  SymbolTable table;
  bool first = true;
  for_each_line(text, [&](int, std::string_view line) {
    if (line.front() == '#') return;
    const auto cells = split_commas(line);
    const bool is_header = first && !cells.empty() && !cells[0].empty() &&
                           !(std::isdigit(static_cast<unsigned char>(cells[0][0])) ||
                             cells[0][0] == '-' || cells[0][0] == '+');
    first = false;
    if (is_header) return;
    if (cells.size() != static_cast<std::size_t>(dim) + 1) {
      throw ConfigError("symbol table: expected " + std::to_string(dim + 1) + " columns");
    }
    std::array<int, 2> key{parse_integer<int>("k1", cells[0]), 0};
    if (dim == 2) key[1] = parse_integer<int>("k2", cells[1]);
    table[key] = parse_real("value", cells.back());
  });
  return table;
}

SymbolTable load_symbol_table(const std::filesystem::path& path, int dim) {
  return parse_symbol_table(read_text_file(path), dim);
}

std::string format_energy_csv(const EnergyBreakdown& e) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "interfacial,well,longrange,penalty,solvation,total\n"
                "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                e.interfacial, e.well, e.longrange, e.penalty, e.solvation, e.total);
  return buf;
}

}  // namespace pacok
