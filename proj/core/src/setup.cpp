#include "owc/setup.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace owc {

namespace {

void fill_gaussian(const PhysicalParams&, const DomainLayout& lay,
                   const InitialSpec& spec, FieldState& u) {
  for (Dom d : {Dom::Eminus, Dom::EplusL, Dom::EplusR}) {
    SubField& f = u.sub(d);
    for (int i = 0; i < f.size(); ++i) {
      const double x = lay.cell_center(d, i);
      const double arg = (x - spec.center) / spec.width;
      f.zeta[i] = spec.amplitude * std::exp(-0.5 * arg * arg);
      f.q[i] = 0.0;
    }
  }
}

void fill_from_file(const PhysicalParams&, const DomainLayout& lay,
                    const InitialSpec& spec, FieldState& u) {
  std::ifstream in(spec.path);
  if (!in) throw ParseError(0, "cannot open initial-data file " + spec.path);

  std::string line;
  int lineno = 0;
  // header
  if (!std::getline(in, line)) throw ParseError(1, "empty initial-data file");
  ++lineno;

  struct Row { double x, zeta, q; };
  std::vector<Row> rows;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream ss(line);
    Row r{};
    char c1 = 0, c2 = 0;
    if (!(ss >> r.x >> c1 >> r.zeta >> c2 >> r.q) || c1 != ',' || c2 != ',')
      throw ParseError(lineno, "expected 'x,zeta,q' row in " + spec.path);
    rows.push_back(r);
  }
  if (static_cast<int>(rows.size()) != lay.total_cells())
    throw ParseError(lineno, "initial-data file has " +
                                 std::to_string(rows.size()) + " rows, layout has " +
                                 std::to_string(lay.total_cells()) + " cells");

  std::size_t k = 0;
  for (Dom d : {Dom::Eminus, Dom::EplusL, Dom::EplusR}) {
    SubField& f = u.sub(d);
    for (int i = 0; i < f.size(); ++i, ++k) {
      const double xc = lay.cell_center(d, i);
      if (std::abs(rows[k].x - xc) > 0.25 * lay.dx(d))
        throw ParseError(static_cast<int>(k + 2),
                         "row x does not match cell center of " +
                             std::string(dom_tag(d)));
      f.zeta[i] = rows[k].zeta;
      f.q[i] = rows[k].q;
    }
  }
}

}  // namespace

void make_initial_state(const PhysicalParams& p, const DomainLayout& lay,
                        const InitialSpec& spec, FieldState& u0,
                        BoundaryState& G0) {
  u0 = FieldState::rest(lay);
  switch (spec.type) {
    case InitialSpec::Type::rest:
      break;
    case InitialSpec::Type::gaussian:
      fill_gaussian(p, lay, spec, u0);
      break;
    case InitialSpec::Type::file:
      fill_from_file(p, lay, spec, u0);
      break;
  }
  G0 = BoundaryState{spec.q_i0, spec.P_ch0, 0.0};
}

}  // namespace owc
