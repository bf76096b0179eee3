#include <cmath>
#include <sstream>

#include "dcp/lp.hpp"

namespace dcp {

namespace {

// Shortest decimal form that round-trips a double.
std::string num(double v) {
  char buf[40];
  for (int prec = 1; prec <= 17; ++prec) {
    snprintf(buf, sizeof(buf), "%.*g", prec, v);
    if (std::stod(buf) == v) break;
  }
  return buf;
}

void write_terms(std::ostream& out, const std::vector<std::pair<int, double>>& terms,
                 const LinearProgram& lp) {
  bool first = true;
  for (auto [j, a] : terms) {
    if (a == 0) continue;
    if (first) {
      if (a < 0) out << "- ";
      first = false;
    } else {
      out << (a < 0 ? " - " : " + ");
    }
    double mag = std::abs(a);
    if (mag != 1.0) out << num(mag) << " ";
    out << lp.var_name(j);
  }
  if (first) out << "0 " << lp.var_name(0);
}

}  // namespace

std::string to_lp_format(const LinearProgram& lp, const std::string& name) {
  std::ostringstream out;
  out << "\\ " << name << "\n";
  out << "Minimize\n obj: ";
  std::vector<std::pair<int, double>> obj;
  for (int j = 0; j < lp.num_vars(); ++j)
    if (lp.objective(j) != 0) obj.emplace_back(j, lp.objective(j));
  write_terms(out, obj, lp);
  out << "\nSubject To\n";
  for (int i = 0; i < lp.num_rows(); ++i) {
    const auto& row = lp.row(i);
    out << " " << row.name << ": ";
    write_terms(out, row.coeffs, lp);
    switch (row.sense) {
      case RowSense::LE:
        out << " <= ";
        break;
      case RowSense::EQ:
        out << " = ";
        break;
      case RowSense::GE:
        out << " >= ";
        break;
    }
    out << num(row.rhs) << "\n";
  }
  out << "Bounds\n";
  for (int j = 0; j < lp.num_vars(); ++j) {
    double lb = lp.lower(j), ub = lp.upper(j);
    if (lb == 0 && ub == kInfinity) continue;  // LP-format default
    out << " ";
    if (lb == -kInfinity && ub == kInfinity) {
      out << lp.var_name(j) << " free\n";
      continue;
    }
    if (lb == ub) {
      out << lp.var_name(j) << " = " << num(lb) << "\n";
      continue;
    }
    if (lb != -kInfinity)
      out << num(lb) << " <= ";
    else
      out << "-inf <= ";
    out << lp.var_name(j);
    if (ub != kInfinity) out << " <= " << num(ub);
    out << "\n";
  }
  bool any_general = false, any_binary = false;
  for (int j = 0; j < lp.num_vars(); ++j) {
    any_general |= lp.var_type(j) == VarType::Integer;
    any_binary |= lp.var_type(j) == VarType::Binary;
  }
  if (any_general) {
    out << "General\n";
    for (int j = 0; j < lp.num_vars(); ++j)
      if (lp.var_type(j) == VarType::Integer) out << " " << lp.var_name(j) << "\n";
  }
  if (any_binary) {
    out << "Binary\n";
    for (int j = 0; j < lp.num_vars(); ++j)
      if (lp.var_type(j) == VarType::Binary) out << " " << lp.var_name(j) << "\n";
  }
  out << "End\n";
  return out.str();
}

}  // namespace dcp
