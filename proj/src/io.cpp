#include "diskpack/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <unistd.h>

namespace diskpack {

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= line.size()) {
    const std::size_t sp = line.find(' ', start);
    const std::size_t end = sp == std::string::npos ? line.size() : sp;
    out.push_back(line.substr(start, end - start));
    if (sp == std::string::npos) break;
    start = sp + 1;
  }
  return out;
}

[[noreturn]] void parse_fail(int line_no, const std::string& why) {
  throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": " + why);
}

template <class T>
T parse_number(const std::string& s, int line_no) {
  T value{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) parse_fail(line_no, "bad number '" + s + "'");
  return value;
}

double parse_real(const std::string& s, int line_no) {
  const double v = parse_number<double>(s, line_no);
  if (!std::isfinite(v)) parse_fail(line_no, "non-finite value '" + s + "'");
  return v;
}

std::string fixed3(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, 3);
  return std::string(buf, r.ptr);
}

std::string general(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

// Lines with comments and blanks removed, paired with 1-based line numbers.
std::vector<std::pair<int, std::string>> records(const std::string& text) {
  std::vector<std::pair<int, std::string>> out;
  std::istringstream in(text);
  std::string line;
  int no = 0;
  while (std::getline(in, line)) {
    ++no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    out.emplace_back(no, line);
  }
  return out;
}

std::string provenance_line(const Provenance& prov) {
  if (const auto* p = std::get_if<FromPattern>(&prov)) {
    return std::string("provenance pattern ") + to_string(p->series) + " " + std::to_string(p->k) + " " +
           to_string(p->variant);
  }
  if (const auto* s = std::get_if<FromSimulation>(&prov)) {
    return "provenance simulation " + std::to_string(s->seed) + " " + s->params_digest;
  }
  if (const auto* f = std::get_if<FromFile>(&prov)) {
    return "provenance file " + (f->path.empty() ? std::string("-") : f->path);
  }
  return "provenance none";
}

Provenance parse_provenance(const std::vector<std::string>& f, int no) {
  if (f.size() == 2 && f[1] == "none") return std::monostate{};
  if (f.size() == 5 && f[1] == "pattern") {
    FromPattern p{parse_series(f[2]), parse_number<int>(f[3], no), {}};
    if (f[4] != "-") p.variant = parse_variant(f[4]);
    return p;
  }
  if (f.size() == 4 && f[1] == "simulation") return FromSimulation{parse_number<std::uint64_t>(f[2], no), f[3]};
  if (f.size() >= 3 && f[1] == "file") {
    std::string path = f[2];
    for (std::size_t i = 3; i < f.size(); ++i) path += " " + f[i];
    return FromFile{path == "-" ? "" : path};
  }
  parse_fail(no, "malformed provenance");
}

struct Parsed {
  Packing packing;
  Provenance stored;
  bool has_contacts = false;
  std::set<std::pair<int, int>> disk_bonds;
  std::set<std::pair<int, Wall>> wall_bonds;
};

Parsed parse_packing(const std::string& text) {
  Parsed out;
  const auto recs = records(text);
  if (recs.empty()) throw Error(ErrorCode::ParseError, "empty packing file");
  std::size_t at = 0;
  auto expect = [&](const char* key, std::size_t fields) {
    if (at >= recs.size()) throw Error(ErrorCode::ParseError, std::string("missing '") + key + "' line");
    const auto& [no, line] = recs[at];
    auto f = split(line);
    if (f[0] != key || f.size() != fields) parse_fail(no, std::string("expected '") + key + "'");
    ++at;
    return std::pair{no, f};
  };
  {
    auto [no, f] = expect("version", 2);
    if (f[1] != "1") parse_fail(no, "unsupported version " + f[1]);
  }
  int n = 0;
  {
    auto [no, f] = expect("n", 2);
    n = parse_number<int>(f[1], no);
    if (n < 2) parse_fail(no, "n must be at least 2");
  }
  {
    auto [no, f] = expect("m", 2);
    out.packing.m = parse_real(f[1], no);
  }
  if (at < recs.size() && split(recs[at].second)[0] == "provenance") {
    const auto& [no, line] = recs[at];
    out.stored = parse_provenance(split(line), no);
    ++at;
  }
  std::vector<std::optional<Point>> centers(n);
  for (; at < recs.size(); ++at) {
    const auto& [no, line] = recs[at];
    const auto f = split(line);
    if (f[0] == "center") {
      if (out.has_contacts) parse_fail(no, "center after contact section");
      if (f.size() != 4) parse_fail(no, "center needs index, x and y");
      const int i = parse_number<int>(f[1], no);
      if (i < 0 || i >= n) parse_fail(no, "index " + f[1] + " out of range");
      if (centers[i]) parse_fail(no, "duplicate index " + f[1]);
      centers[i] = Point{parse_real(f[2], no), parse_real(f[3], no)};
    } else if (f[0] == "contact") {
      out.has_contacts = true;
      if (f.size() != 4) parse_fail(no, "contact needs a kind and two fields");
      const int i = parse_number<int>(f[2], no);
      if (i < 0 || i >= n) parse_fail(no, "index out of range");
      if (f[1] == "disk") {
        const int j = parse_number<int>(f[3], no);
        if (j < 0 || j >= n || j == i) parse_fail(no, "index out of range");
        if (!out.disk_bonds.insert(std::minmax(i, j)).second) parse_fail(no, "duplicate contact");
      } else if (f[1] == "wall") {
        if (!out.wall_bonds.insert({i, parse_wall(f[3])}).second) parse_fail(no, "duplicate contact");
      } else {
        parse_fail(no, "unknown contact kind '" + f[1] + "'");
      }
    } else {
      parse_fail(no, "unknown record '" + f[0] + "'");
    }
  }
  for (int i = 0; i < n; ++i) {
    if (!centers[i]) throw Error(ErrorCode::ParseError, "missing center " + std::to_string(i));
    out.packing.centers.push_back(*centers[i]);
  }
  return out;
}

}  // namespace

std::string save_packing(const Packing& p, bool with_contacts) {
  std::string s = "# disk packing in the centers square\nversion 1\n";
  s += "n " + std::to_string(p.n()) + "\n";
  s += "m " + format_sig14(p.m) + "\n";
  s += provenance_line(p.provenance) + "\n";
  for (int i = 0; i < p.n(); ++i) {
    s += "center " + std::to_string(i) + " " + format_sig14(p.centers[i].x) + " " + format_sig14(p.centers[i].y) + "\n";
  }
  if (with_contacts) {
    const ContactGraph g = contact_graph(p);
    for (const auto& b : g.disk_bonds) s += "contact disk " + std::to_string(b.i) + " " + std::to_string(b.j) + "\n";
    for (const auto& w : g.wall_bonds) s += "contact wall " + std::to_string(w.i) + " " + to_string(w.wall) + "\n";
  }
  return s;
}

Provenance stored_provenance(const std::string& text) { return parse_packing(text).stored; }

Packing load_packing(const std::string& text, const std::string& source) {
  Parsed parsed = parse_packing(text);
  Packing& p = parsed.packing;
  p.provenance = FromFile{source};
  // Allow for the 14-digit rounding of coordinates.
  const ValidityReport v = validate(p, 1e-11);
  if (!v.valid) throw Error(ErrorCode::ValidationError, v.message);
  if (parsed.has_contacts) {
    const ContactGraph g = contact_graph(p);
    std::set<std::pair<int, int>> disk;
    for (const auto& b : g.disk_bonds) disk.insert({b.i, b.j});
    std::set<std::pair<int, Wall>> wall;
    for (const auto& w : g.wall_bonds) wall.insert({w.i, w.wall});
    for (const auto& b : parsed.disk_bonds) {
      if (!disk.count(b)) {
        throw Error(ErrorCode::ContactMismatch, "stored contact " + std::to_string(b.first) + "-" +
                                                    std::to_string(b.second) + " is not a bond");
      }
    }
    for (const auto& w : parsed.wall_bonds) {
      if (!wall.count(w)) {
        throw Error(ErrorCode::ContactMismatch,
                    "stored wall contact of disk " + std::to_string(w.first) + " is not a bond");
      }
    }
    if (disk.size() != parsed.disk_bonds.size() || wall.size() != parsed.wall_bonds.size()) {
      throw Error(ErrorCode::ContactMismatch, "the geometry has bonds missing from the contact section");
    }
  }
  return p;
}

std::string BestKnownEntry::describe() const {
  if (!simulated) return "literature: " + note;
  return "simulated seeds " + std::to_string(seed_base) + ".." + std::to_string(seed_base + seed_count - 1) +
         ", best seed " + std::to_string(best_seed) + ", g=" + general(growth_rate);
}

SimParams BestKnownEntry::params() const {
  SimParams p;
  if (simulated) p.growth_rate = growth_rate;
  return p;
}

bool BestKnownTable::merge(const BestKnownEntry& e) {
  auto it = rows.find(e.n);
  if (it != rows.end() && !(e.m > it->second.m)) return false;
  rows[e.n] = e;
  return true;
}

std::optional<BestKnownEntry> BestKnownTable::find(int n) const {
  auto it = rows.find(n);
  if (it == rows.end()) return std::nullopt;
  return it->second;
}

std::map<int, Challenger> BestKnownTable::challengers() const {
  std::map<int, Challenger> out;
  for (const auto& [n, e] : rows) out[n] = {e.m, e.describe()};
  return out;
}

std::string save_table(const BestKnownTable& t) {
  std::string s =
      "# best known m by n\n"
      "# row <n> <m> simulated <seed_base> <seed_count> <best_seed> <growth_rate> <digest>\n"
      "version 1\n";
  for (const auto& [n, e] : t.rows) {
    s += "row " + std::to_string(n) + " " + format_sig14(e.m);
    if (e.simulated) {
      s += " simulated " + std::to_string(e.seed_base) + " " + std::to_string(e.seed_count) + " " +
           std::to_string(e.best_seed) + " " + general(e.growth_rate) + " " + e.params_digest;
    } else {
      s += " literature " + e.note;
    }
    s += "\n";
  }
  return s;
}

BestKnownTable load_table(const std::string& text) {
  BestKnownTable t;
  const auto recs = records(text);
  if (recs.empty() || recs[0].second != "version 1") throw Error(ErrorCode::ParseError, "table must start with 'version 1'");
  for (std::size_t r = 1; r < recs.size(); ++r) {
    const auto& [no, line] = recs[r];
    const auto f = split(line);
    if (f[0] != "row" || f.size() < 4) parse_fail(no, "expected a row record");
    BestKnownEntry e;
    e.n = parse_number<int>(f[1], no);
    e.m = parse_real(f[2], no);
    if (f[3] == "simulated") {
      if (f.size() != 9) parse_fail(no, "simulated row needs 5 fields after the source");
      e.seed_base = parse_number<std::uint64_t>(f[4], no);
      e.seed_count = parse_number<int>(f[5], no);
      e.best_seed = parse_number<std::uint64_t>(f[6], no);
      e.growth_rate = parse_real(f[7], no);
      e.params_digest = f[8];
    } else if (f[3] == "literature") {
      e.simulated = false;
      for (std::size_t i = 4; i < f.size(); ++i) e.note += (i > 4 ? " " : "") + f[i];
    } else {
      parse_fail(no, "unknown source '" + f[3] + "'");
    }
    if (t.rows.count(e.n)) parse_fail(no, "duplicate n " + f[1]);
    t.rows[e.n] = e;
  }
  return t;
}

std::string render_svg(const Packing& p, const ContactGraph& g, const SvgOptions& options) {
  const double size = options.size;
  const double scale = size / (1.0 + p.m);
  auto X = [&](double x) { return fixed3((x + 0.5 * p.m) * scale); };
  auto Y = [&](double y) { return fixed3(size - (y + 0.5 * p.m) * scale); };
  const std::string dot = fixed3(std::max(1.0, 0.06 * p.m * scale));
  std::string s = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" + fixed3(size) + "\" height=\"" +
       fixed3(size) + "\" viewBox=\"0 0 " + fixed3(size) + " " + fixed3(size) + "\">\n";
  s += "<rect x=\"0\" y=\"0\" width=\"" + fixed3(size) + "\" height=\"" + fixed3(size) +
       "\" fill=\"white\" stroke=\"black\" stroke-width=\"2\"/>\n";
  const std::string r = fixed3(0.5 * p.m * scale);
  for (int i = 0; i < p.n(); ++i) {
    const bool solid = g.roles.empty() || g.roles[i] == DiskRole::Solid;
    s += "<circle cx=\"" + X(p.centers[i].x) + "\" cy=\"" + Y(p.centers[i].y) + "\" r=\"" + r + "\" fill=\"" +
         (solid ? "#b0b0b0" : "white") + "\" stroke=\"black\" stroke-width=\"1\"/>\n";
  }
  auto put_dot = [&](double x, double y) {
    s += "<ellipse cx=\"" + X(x) + "\" cy=\"" + Y(y) + "\" rx=\"" + dot + "\" ry=\"" + dot + "\" fill=\"black\"/>\n";
  };
  for (const auto& b : g.disk_bonds) {
    const Point mid = 0.5 * (p.centers[b.i] + p.centers[b.j]);
    put_dot(mid.x, mid.y);
  }
  for (const auto& w : g.wall_bonds) {
    const Point c = p.centers[w.i];
    const double h = 0.5 * p.m;
    switch (w.wall) {
      case Wall::Left: put_dot(-h, c.y); break;
      case Wall::Right: put_dot(1.0 + h, c.y); break;
      case Wall::Bottom: put_dot(c.x, -h); break;
      case Wall::Top: put_dot(c.x, 1.0 + h); break;
    }
  }
  if (options.labels) {
    const std::string font = fixed3(0.35 * p.m * scale);
    for (int i = 0; i < p.n(); ++i) {
      s += "<text x=\"" + X(p.centers[i].x) + "\" y=\"" + Y(p.centers[i].y) + "\" font-size=\"" + font +
           "\" text-anchor=\"middle\" dominant-baseline=\"central\">" + std::to_string(i + 1) + "</text>\n";
    }
  }
  s += "</svg>\n";
  return s;
}

std::string export_series_csv(const SeriesReport& r) {
  std::string s = "k,n,exists,m_pattern,m_challenger,challenger_source,beaten,overlap\n";
  for (const auto& row : r.rows) {
    s += std::to_string(row.k) + "," + std::to_string(row.n) + "," + (row.exists ? "true" : "false") + ",";
    s += (row.m_pattern ? format_sig14(*row.m_pattern) : "") + ",";
    s += (row.m_challenger ? format_sig14(*row.m_challenger) : "") + ",";
    std::string src = row.challenger_source;
    for (char& c : src) {
      if (c == ',' || c == '"') c = ';';
    }
    s += src + "," + (row.beaten ? "true" : "false") + ",";
    s += (row.overlap ? format_sig14(*row.overlap) : "") + "\n";
  }
  return s;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_file_atomic(const std::string& path, const std::string& contents) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  const fs::path tmp = target.parent_path() / (target.filename().string() + ".tmp" + std::to_string(::getpid()));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << contents;
    out.flush();
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  fs::rename(tmp, target);
}

}  // namespace diskpack
