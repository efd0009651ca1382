#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "wittdeform/suite.hpp"

namespace {

using nlohmann::json;

constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

int cmd_derive(unsigned p, unsigned m, unsigned max_len) {
  if (!wd::is_prime(p)) throw wd::Error(wd::Errc::MalformedSpec, std::to_string(p) + " is not a prime");
  if (max_len) wd::set_max_length(p, max_len);
  if (m == 0 || m > wd::max_length(p))
    throw wd::Error(wd::Errc::BudgetExceeded,
                    "length " + std::to_string(m) + " is outside 1.." + std::to_string(wd::max_length(p)));
  std::cout << "cache " << wd::cache_dir() << "\n";
  for (auto op : {wd::OpKind::Sum, wd::OpKind::Prod, wd::OpKind::Neg, wd::OpKind::Frobenius}) {
    const bool cached = wd::load_cached_table(p, m, op) != nullptr;
    auto t = wd::op_table(p, m, op);
    std::cout << wd::op_name(op) << " p=" << p << " m=" << m << " " << (cached ? "cached" : "derived") << " "
              << t->body_sha256 << "\n";
  }
  return 0;
}

std::vector<std::string> split_ids(const std::string& s) {
  std::vector<std::string> out;
  if (s.empty() || s == "all") return out;
  std::size_t start = 0;
  while (start <= s.size()) {
    auto end = s.find(',', start);
    if (end == std::string::npos) end = s.size();
    if (end > start) out.push_back(s.substr(start, end - start));
    start = end + 1;
  }
  const auto& ids = wd::check_ids();
  for (const auto& id : out)
    if (std::find(ids.begin(), ids.end(), id) == ids.end())
      throw wd::Error(wd::Errc::MalformedSpec, "unknown check id '" + id + "'");
  return out;
}

int cmd_verify(const std::string& config, const std::string& only, std::string format, bool timings,
               const std::string& output) {
  wd::SuiteConfig cfg = wd::load_config(config);
  wd::apply_settings(cfg);
  if (format.empty()) format = cfg.output;
  wd::RunOptions opt{split_ids(only), timings};
  auto scenarios = wd::validate(cfg);
  json report = wd::run_suite(cfg, scenarios, opt);
  std::string text = format == "md" ? wd::report_markdown(report) : report.dump(2) + "\n";
  if (output.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(output, std::ios::binary);
    if (!(out << text)) throw wd::Error(wd::Errc::Io, "cannot write " + output);
  }
  const auto& sum = report.at("summary");
  std::cerr << "pass " << sum.at("pass") << ", fail " << sum.at("fail") << ", inconclusive " << sum.at("inconclusive")
            << "\n";
  return wd::report_failures(report) ? kExitFail : 0;
}

int cmd_pairing_table(const std::string& config, const std::string& id) {
  wd::SuiteConfig cfg = wd::load_config(config);
  wd::apply_settings(cfg);
  auto it = std::find_if(cfg.scenarios.begin(), cfg.scenarios.end(), [&](const auto& s) { return s.id == id; });
  if (it == cfg.scenarios.end()) throw wd::Error(wd::Errc::MalformedSpec, "no scenario '" + id + "'");
  wd::Scenario scn = wd::build_scenario(*it);
  auto tables = wd::pairing_tables(scn, cfg.budgets);
  std::cout << "algebra\tclass\tpoint\tvalue\n";
  for (const auto& t : tables)
    for (std::size_t i = 0; i < t.classes.size(); ++i)
      for (std::size_t j = 0; j < t.points.size(); ++j)
        std::cout << t.algebra << '\t' << t.classes[i] << '\t' << t.points[j] << '\t' << t.values[i][j] << '\n';
  bool ok = true;
  for (const auto& t : tables) {
    std::cerr << t.algebra << ": " << t.classes.size() << " classes, " << t.points.size() << " points, "
              << t.group_likes << " group-likes, " << (t.bijective ? "bijective" : "not bijective") << "\n";
    ok = ok && t.bijective;
  }
  return ok ? 0 : kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact Witt vector and deformed Artin-Hasse verification"};
  app.require_subcommand(1);

  unsigned p = 2, m = 2, max_len = 0;
  auto* derive = app.add_subcommand("derive", "derive and cache the universal operation tables");
  derive->add_option("--p", p, "prime")->required();
  derive->add_option("--m", m, "Witt length")->required();
  derive->add_option("--max-length", max_len, "raise the length limit for p");

  std::string config, only, format, output, scenario;
  bool timings = false;
  auto* verify = app.add_subcommand("verify", "run the checks listed in a config");
  verify->add_option("--config", config, "config file")->required();
  verify->add_option("--only", only, "comma-separated check ids, or all");
  verify->add_option("--format", format, "json or md")->check(CLI::IsMember({"json", "md"}));
  verify->add_option("--output", output, "write the report here instead of stdout");
  verify->add_flag("--timings", timings, "add per-check seconds to the report");

  auto* pairing = app.add_subcommand("pairing-table", "tabulate the pairing for one scenario as TSV");
  pairing->add_option("--config", config, "config file")->required();
  pairing->add_option("--scenario", scenario, "scenario id")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kExitUsage;
  }

  try {
    if (*derive) return cmd_derive(p, m, max_len);
    if (*verify) return cmd_verify(config, only, format, timings, output);
    return cmd_pairing_table(config, scenario);
  } catch (const wd::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}
