#include <cstdio>
#include <string>

#include "rngaudit/errors.hpp"
#include "rngaudit/report.hpp"

namespace rngaudit {

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string num(std::uint64_t v) { return std::to_string(v); }

template <typename T>
std::string opt(const std::optional<T>& v) {
  return v ? num(*v) : std::string();
}

class CsvWriter {
 public:
  explicit CsvWriter(const std::filesystem::path& dir) : dir_(dir) {}

  void write(const std::string& name, const std::string& body) {
    const auto path = dir_ / name;
    write_file_text(path, body);
    written_.push_back(path);
  }

  std::vector<std::filesystem::path> take() && { return std::move(written_); }

 private:
  std::filesystem::path dir_;
  std::vector<std::filesystem::path> written_;
};

std::string word_string(std::size_t word, unsigned m) {
  std::string s(m, '0');
  for (unsigned i = 0; i < m; ++i) {
    if ((word >> (m - 1 - i)) & 1u) s[i] = '1';
  }
  return s;
}

}  // namespace

std::string feller_csv(const std::vector<FellerRow>& rows) {
  std::string out = "k,alpha_ideal,alpha_extracted,relative_change,windows,no_run_windows\n";
  for (const auto& r : rows) {
    out += std::to_string(r.k) + "," + num(r.alpha_ideal) + "," + opt(r.alpha_extracted) + "," +
           opt(r.relative_change) + "," + num(r.windows_scanned) + "," + num(r.no_run_windows) + "\n";
  }
  return out;
}

std::vector<std::filesystem::path> emit(const Audit& audit, EmitFormat format, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());

  const auto& r = audit.report;
  if (format == EmitFormat::json) {
    const auto path = dir / "report.json";
    write_file_text(path, report_to_json(r));
    return {path};
  }

  CsvWriter csv(dir);
  if (r.balance) {
    csv.write("balance.csv", "n,ones,p1,sigma_single\n" + num(r.balance->n) + "," + num(r.balance->ones) + "," +
                                 num(r.balance->p1) + "," + num(r.balance->sigma_single) + "\n");
  }
  if (!audit.block_balances.empty()) {
    std::string body = "block_size,block_index,p1,predicted_sigma\n";
    for (const auto& bb : audit.block_balances) {
      for (std::size_t i = 0; i < bb.p1.size(); ++i) {
        body += num(bb.block_size) + "," + std::to_string(i) + "," + num(bb.p1[i]) + "," + num(bb.predicted_sigma) + "\n";
      }
    }
    csv.write("block_balance.csv", body);
  }
  if (r.tuples_overlapping || r.tuples_disjoint) {
    std::string body = "mode,c00,c01,c10,c11\n";
    for (const auto* t : {&r.tuples_overlapping, &r.tuples_disjoint}) {
      if (!*t) continue;
      const auto& tc = **t;
      body += std::string(to_string(tc.mode)) + "," + num(tc.c00) + "," + num(tc.c01) + "," + num(tc.c10) + "," +
              num(tc.c11) + "\n";
    }
    csv.write("tuples.csv", body);
  }
  if (r.conditionals) {
    const auto& c = *r.conditionals;
    csv.write("conditionals.csv", "y,x,p,sigma_cond\n0,0," + num(c.p_0_given_0) + "," + num(c.sigma_cond) +
                                      "\n0,1," + num(c.p_1_given_0) + "," + num(c.sigma_cond) + "\n1,0," +
                                      num(c.p_0_given_1) + "," + num(c.sigma_cond) + "\n1,1," +
                                      num(c.p_1_given_1) + "," + num(c.sigma_cond) + "\n");
  }
  if (!r.waiting_times.empty()) {
    std::string body = "pattern,theoretical_mean,theoretical_variance,occurrences,empirical_mean\n";
    for (const auto& w : r.waiting_times) {
      body += w.pattern + "," + num(w.theoretical_mean) + "," + num(w.theoretical_variance) + "," +
              (w.empirical ? num(w.empirical->occurrences) : "") + "," +
              (w.empirical ? num(w.empirical->mean_distance) : "") + "\n";
    }
    csv.write("waiting_times.csv", body);
  }
  if (!r.feller.empty()) csv.write("feller.csv", feller_csv(r.feller));
  if (!r.borel.empty()) {
    std::string body = "m,word,count,frequency\n";
    for (const auto& b : r.borel) {
      for (std::size_t w = 0; w < b.counts.size(); ++w) {
        body += std::to_string(b.m) + "," + word_string(w, b.m) + "," + num(b.counts[w]) + "," +
                num(b.frequencies[w]) + "\n";
      }
    }
    csv.write("borel.csv", body);
  }
  if (!r.autocorrelation.empty()) {
    std::string body = "lag,coefficient\n";
    for (std::size_t l = 0; l < r.autocorrelation.size(); ++l) {
      body += std::to_string(l) + "," + num(r.autocorrelation[l]) + "\n";
    }
    csv.write("autocorrelation.csv", body);
  }
  if (r.entropy) {
    std::string scatter = "N,block_index,kind,one_minus_H\n";
    for (const auto& series : audit.entropy_series) {
      const std::string n = num(series.block_size);
      for (const auto& pt : series.points) {
        const std::string idx = std::to_string(pt.block_index);
        scatter += n + "," + idx + ",shannon_cond," + num(pt.shannon_cond.deficit) + "\n";
        scatter += n + "," + idx + ",min_cond," + num(pt.min_cond.deficit) + "\n";
      }
    }
    csv.write("entropy_scatter.csv", scatter);

    std::string bounds = "N,kind,variant,m_sigma,one_minus_H\n";
    for (const auto& c : r.entropy->curves) {
      for (const auto& p : c.points) {
        bounds += num(p.n) + "," + std::string(to_string(c.kind)) + "," + std::string(to_string(c.variant)) + "," +
                  num(c.m_sigma) + "," + num(p.deficit) + "\n";
      }
    }
    csv.write("entropy_bounds.csv", bounds);
  }
  std::string flags = "statistic,observed,expected,sigma_distance,threshold_sigma,raised\n";
  for (const auto& c : r.checks) {
    flags += c.statistic + "," + num(c.observed) + "," + num(c.expected) + "," + num(c.sigma_distance) + "," +
             num(c.threshold_sigma) + "," + (c.raised() ? "1" : "0") + "\n";
  }
  csv.write("flags.csv", flags);
  return std::move(csv).take();
}

}  // namespace rngaudit
