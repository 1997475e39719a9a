#include "biot/report.hpp"

#include <algorithm>
#include <charconv>
#include <iomanip>
#include <map>
#include <ostream>

namespace biot {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

void write_config_comment(const ConfigEntries& cfg, std::ostream& out) {
  for (const auto& [k, v] : cfg) out << "# " << k << '=' << v << '\n';
}

void write_config_markdown(const ConfigEntries& cfg, std::ostream& out) {
  out << "| key | value |\n|---|---|\n";
  for (const auto& [k, v] : cfg) out << "| " << k << " | " << v << " |\n";
  out << '\n';
}

void write_convergence_csv(const std::vector<ConvergenceCell>& cells, std::ostream& out) {
  out << "K,N,e_energy,e_p,rate_energy,rate_p,ok\n";
  for (const auto& c : cells) {
    out << format_double(c.K) << ',' << c.n << ',' << format_double(c.e_energy) << ',' << format_double(c.e_p)
        << ',' << (c.rate_energy ? format_double(*c.rate_energy) : "") << ','
        << (c.rate_p ? format_double(*c.rate_p) : "") << ',' << (c.ok ? 1 : 0) << '\n';
  }
}

void write_convergence_markdown(const std::vector<ConvergenceCell>& cells, std::ostream& out) {
  std::vector<int> ns;
  std::vector<double> ks;
  for (const auto& c : cells) {
    if (std::find(ns.begin(), ns.end(), c.n) == ns.end()) ns.push_back(c.n);
    if (std::find(ks.begin(), ks.end(), c.K) == ks.end()) ks.push_back(c.K);
  }
  out << "| K | error |";
  for (int n : ns) out << " N=" << n << " |";
  out << "\n|---|---|";
  for (std::size_t i = 0; i < ns.size(); ++i) out << "---|";
  out << '\n';
  auto row = [&](double K, const char* name, auto get) {
    out << "| " << format_double(K) << " | " << name << " |";
    for (int n : ns) {
      const auto it = std::find_if(cells.begin(), cells.end(), [&](const auto& c) { return c.K == K && c.n == n; });
      if (it == cells.end() || !it->ok)
        out << " - |";
      else
        out << ' ' << std::fixed << std::setprecision(4) << get(*it) << std::defaultfloat << " |";
    }
    out << '\n';
  };
  for (double K : ks) {
    row(K, "energy", [](const ConvergenceCell& c) { return c.e_energy; });
    row(K, "pressure", [](const ConvergenceCell& c) { return c.e_p; });
  }
}

void write_bench_csv(const std::vector<BenchCell>& cells, std::ostream& out) {
  out << "problem,sweep,point,n,tau,K,lambda,mu,precond,mean_iterations,converged,inner_failures,runs\n";
  for (const auto& c : cells) {
    out << to_string(c.point.problem) << ',' << c.point.sweep << ',' << c.point.label << ',' << c.point.n << ','
        << format_double(c.point.params.tau) << ',' << format_double(c.point.params.permeability) << ','
        << format_double(c.point.params.lambda) << ',' << format_double(c.point.params.mu) << ','
        << c.precond.name() << ',' << c.mean_iterations << ',' << (c.converged ? 1 : 0) << ',' << c.inner_failures
        << ',';
    for (std::size_t i = 0; i < c.iterations.size(); ++i) out << (i ? ";" : "") << c.iterations[i];
    out << '\n';
  }
}

void write_bench_markdown(const std::vector<BenchCell>& cells, std::ostream& out) {
  std::vector<std::string> sweeps;
  for (const auto& c : cells)
    if (std::find(sweeps.begin(), sweeps.end(), c.point.sweep) == sweeps.end()) sweeps.push_back(c.point.sweep);
  for (const auto& sweep : sweeps) {
    std::vector<std::string> labels, preconds;
    std::map<std::pair<std::string, std::string>, const BenchCell*> at;
    for (const auto& c : cells) {
      if (c.point.sweep != sweep) continue;
      if (std::find(labels.begin(), labels.end(), c.point.label) == labels.end()) labels.push_back(c.point.label);
      const std::string pn = c.precond.name();
      if (std::find(preconds.begin(), preconds.end(), pn) == preconds.end()) preconds.push_back(pn);
      at[{pn, c.point.label}] = &c;
    }
    out << "**" << sweep << "**\n\n| |";
    for (const auto& l : labels) out << ' ' << l << " |";
    out << "\n|---|";
    for (std::size_t i = 0; i < labels.size(); ++i) out << "---|";
    out << '\n';
    for (const auto& pn : preconds) {
      out << "| " << pn << " |";
      for (const auto& l : labels) {
        const auto it = at.find({pn, l});
        if (it == at.end())
          out << " |";
        else
          out << ' ' << it->second->mean_iterations << (it->second->converged ? "" : "*") << " |";
      }
      out << '\n';
    }
    out << '\n';
  }
}

void write_pressure_csv(const Mesh& mesh, const Vec& p, std::ostream& out) {
  out << "triangle,x,y,p\n";
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto& tri = mesh.triangles[t];
    const Point c = (mesh.vertices[tri[0]] + mesh.vertices[tri[1]] + mesh.vertices[tri[2]]) / 3.0;
    out << t << ',' << format_double(c.x()) << ',' << format_double(c.y()) << ',' << format_double(p(t)) << '\n';
  }
}

}  // namespace biot
