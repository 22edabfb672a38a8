#pragma once

// The `kl` command line front end. run_cli is the whole program minus
// main(), so the test suite can drive it in-process.
//
// Exit codes: 0 success, 1 verification failure (or a broken internal
// invariant), 2 usage or parse error, 3 resource cap exceeded.

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "affkl/cache_file.hpp"
#include "affkl/element_spec.hpp"
#include "affkl/errors.hpp"
#include "affkl/fc_star.hpp"
#include "affkl/group.hpp"
#include "affkl/kl_engine.hpp"
#include "affkl/mu_decider.hpp"

namespace affkl {

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int verification_failed = 1;
inline constexpr int usage = 2;
inline constexpr int resource = 3;
}  // namespace exit_code

namespace detail {

using Json = nlohmann::ordered_json;

inline Json window_json(const AffinePermutation& w) { return Json(std::vector<Entry>(w.window().begin(), w.window().end())); }

inline std::string window_csv(const AffinePermutation& w) { return join(w.window()); }

inline std::optional<std::filesystem::path> resolve_cache_path(const std::string& flag, int n) {
  if (!flag.empty()) return std::filesystem::path(flag);
  if (const char* dir = std::getenv("KL_CACHE_DIR"); dir && *dir)
    return std::filesystem::path(dir) / ("kl-cache-n" + std::to_string(n) + ".txt");
  return std::nullopt;
}

}  // namespace detail

inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  using detail::Json;

  CLI::App app{"Kazhdan-Lusztig polynomials and mu values for affine type A", "kl"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string cache_flag;
  std::string format = "json";
  app.add_option("--cache", cache_flag, "KL cache file to load before and save after computing");
  app.add_option("--format", format, "output format")->check(CLI::IsMember({"json", "csv"}));

  int n = 0;
  std::string x_arg;
  std::string w_arg;
  std::string method = "engine";
  int max_len = 0;
  int jobs = 1;

  auto* cmd_p = app.add_subcommand("p", "KL polynomial P_{x,w}");
  auto* cmd_mu = app.add_subcommand("mu", "leading coefficient mu(x,w)");
  auto* cmd_fc = app.add_subcommand("fc", "full commutativity and classification of w");
  auto* cmd_verify = app.add_subcommand("verify", "sweep mu(x,w) in {0,1} for FC x against the decider");
  auto* cmd_enum = app.add_subcommand("enum-fc", "list fully commutative elements by length");

  for (auto* cmd : {cmd_p, cmd_mu, cmd_fc, cmd_verify, cmd_enum}) cmd->add_option("--n", n, "rank n >= 3")->required();
  for (auto* cmd : {cmd_p, cmd_mu}) {
    cmd->add_option("--x", x_arg, "element: word '1,2' or window '[2,1,3]'")->required();
    cmd->add_option("--w", w_arg, "element: word '1,2' or window '[2,1,3]'")->required();
  }
  cmd_fc->add_option("--w", w_arg, "element: word '1,2' or window '[2,1,3]'")->required();
  cmd_mu->add_option("--method", method, "engine, decider, or both")->check(CLI::IsMember({"engine", "decider", "both"}));
  for (auto* cmd : {cmd_verify, cmd_enum}) cmd->add_option("--max-len", max_len, "maximum length")->required();
  cmd_verify->add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? exit_code::ok : exit_code::usage;
  }

  const bool csv = format == "csv";
  try {
    const GroupContext ctx(n);

    if (cmd_enum->parsed()) {
      for (const auto& [len, layer] : enumerate_by_length(ctx, max_len))
        for (const auto& w : layer)
          if (is_fully_commutative(w)) out << (csv ? detail::window_csv(w) : detail::window_json(w).dump()) << '\n';
      return exit_code::ok;
    }

    if (cmd_fc->parsed()) {
      const auto w = parse_element(ctx, ElementSpec::from_argument(w_arg));
      const bool fc = is_fully_commutative(w);
      std::vector<std::string> cases;
      if (fc)
        for (FcCase c : classify_fc(w).cases) cases.emplace_back(to_string(c));
      if (csv) {
        std::string joined;
        for (const auto& c : cases) joined += (joined.empty() ? "" : ";") + c;
        out << "fully_commutative,cases\n" << (fc ? "true" : "false") << ',' << joined << '\n';
      } else {
        out << Json{{"fully_commutative", fc}, {"cases", cases}}.dump() << '\n';
      }
      return exit_code::ok;
    }

    KlCache engine(ctx);
    const auto cache_path = detail::resolve_cache_path(cache_flag, n);
    if (cache_path) load_cache(*cache_path, engine);

    int code = exit_code::ok;
    if (cmd_p->parsed()) {
      const auto x = parse_element(ctx, ElementSpec::from_argument(x_arg));
      const auto w = parse_element(ctx, ElementSpec::from_argument(w_arg));
      const auto p = engine.polynomial(x, w);
      if (csv) {
        out << "k,coefficient\n";
        for (std::size_t k = 0; k < p.coefficients().size(); ++k) out << k << ',' << p.coefficients()[k] << '\n';
      } else {
        out << Json{{"coeffs", p.coefficients()}}.dump() << '\n';
      }
    } else if (cmd_mu->parsed()) {
      const auto x = parse_element(ctx, ElementSpec::from_argument(x_arg));
      const auto w = parse_element(ctx, ElementSpec::from_argument(w_arg));
      std::optional<std::int64_t> engine_mu;
      std::optional<int> decided;
      if (method != "decider") engine_mu = engine.mu(x, w);
      if (method != "engine") {
        if (method == "decider" || is_fully_commutative(x)) decided = MuDecider(ctx).decide(x, w).value;
      }
      const std::int64_t value = engine_mu ? *engine_mu : *decided;
      Json j{{"mu", value}};
      std::string agree_csv;
      if (method == "both") {
        if (decided) {
          j["agree"] = *decided == *engine_mu;
          agree_csv = j["agree"].get<bool>() ? "true" : "false";
        } else {
          j["agree"] = nullptr;  // decider needs fully commutative x
        }
      }
      if (csv)
        out << "mu,agree\n" << value << ',' << agree_csv << '\n';
      else
        out << j.dump() << '\n';
    } else if (cmd_verify->parsed()) {
      MuDecider decider(ctx);
      const auto report = verify_theorem(ctx, max_len, engine, decider, jobs);
      Json j{{"n", report.n},
             {"max_len", report.max_len},
             {"pairs_checked", report.pairs_checked},
             {"mu_one", report.mu_one},
             {"mu_zero", report.mu_zero},
             {"disagreements", report.disagreements},
             {"out_of_range", report.out_of_range},
             {"fallbacks", report.fallbacks},
             {"ok", report.ok()}};
      if (report.first_failure)
        j["first_failure"] = {{"x", detail::window_json(report.first_failure->first)},
                              {"w", detail::window_json(report.first_failure->second)}};
      if (csv) {
        out << "n,max_len,pairs_checked,mu_one,mu_zero,disagreements,out_of_range,fallbacks,ok\n"
            << report.n << ',' << report.max_len << ',' << report.pairs_checked << ',' << report.mu_one << ','
            << report.mu_zero << ',' << report.disagreements << ',' << report.out_of_range << ',' << report.fallbacks
            << ',' << (report.ok() ? "true" : "false") << '\n';
      } else {
        out << j.dump() << '\n';
      }
      if (!report.ok()) code = exit_code::verification_failed;
    }

    if (cache_path) save_cache(*cache_path, engine);
    return code;
  } catch (const ParseError& e) {
    err << "kl: " << e.what() << '\n';
    return exit_code::usage;
  } catch (const ArgumentError& e) {
    err << "kl: " << e.what() << '\n';
    return exit_code::usage;
  } catch (const ResourceError& e) {
    err << "kl: " << e.what() << '\n';
    return exit_code::resource;
  } catch (const std::exception& e) {
    err << "kl: " << e.what() << '\n';
    return exit_code::verification_failed;
  }
}

}  // namespace affkl
