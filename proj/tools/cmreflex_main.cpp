#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "cmreflex/enumerate.hpp"
#include "cmreflex/errors.hpp"
#include "cmreflex/io.hpp"

using namespace cmreflex;
using io::json;

namespace {

constexpr const char* kVersion = "0.1.0";

enum Exit { kOk = 0, kFailure = 1, kUsage = 2, kClosure = 3 };

struct RunConfig {
  std::string command;
  std::vector<std::string> inputs;
  unsigned long seed = 42;
  unsigned bits = 64;
  unsigned long budget = 0;
  std::string format = "records";
  json params = json::object();

  json header() const {
    return json{{"record", "config"}, {"command", command}, {"inputs", inputs}, {"seed", seed},
                {"bits", bits},       {"budget", budget},   {"format", format}, {"version", kVersion},
                {"params", params}};
  }
};

// Records are buffered and written at the end so that a run emits them in
// one canonical order.
class Report {
 public:
  explicit Report(const RunConfig& cfg) : cfg_(cfg) {}
  void add(json r) { records_.push_back(std::move(r)); }
  void summary(json s) { summary_ = std::move(s); }
  void note(const std::string& line) { notes_ << line << '\n'; }
  void emit() const {
    std::cout << cfg_.header().dump() << '\n';
    if (cfg_.format == "records")
      for (const auto& r : records_) std::cout << r.dump() << '\n';
    json s = summary_;
    s["record"] = "summary";
    std::cout << s.dump() << '\n';
    std::cerr << notes_.str();
  }

 private:
  const RunConfig& cfg_;
  std::vector<json> records_;
  json summary_ = json::object();
  std::ostringstream notes_;
};

std::string decimal(const Rational& q, unsigned digits) {
  Integer scale = pow(Integer(10), digits);
  Integer n = floor(q * Rational(scale) + Rational(1, 2));
  bool neg = n < 0;
  if (neg) n = -n;
  std::string s = n.get_str();
  if (s.size() <= digits) s = std::string(digits + 1 - s.size(), '0') + s;
  s.insert(s.size() - digits, ".");
  return (neg ? "-" : "") + s;
}

std::string complex_string(const Ball& z, unsigned bits) {
  unsigned digits = std::max(1u, bits * 3 / 10);
  std::string re = decimal(z.re, digits), im = decimal(abs(z.im), digits);
  return re + (z.im < 0 ? " - " : " + ") + im + "i";
}

int cmd_cm(const RunConfig& cfg, Report& rep) {
  NumberField k = io::load_field(cfg.inputs.at(0));
  json field = io::to_json(k);
  field["record"] = "field";
  field["degree"] = k.degree();
  auto cm = cm_check(k);
  field["cm"] = cm.has_value();
  rep.add(field);
  if (!cm) {
    rep.summary({{"cm", false}, {"types", 0}});
    rep.note(k.min_poly().to_string() + ": not a CM field");
    return kOk;
  }
  RootIsolation roots = k.roots(cfg.bits);
  auto types = enumerate_cm_types(*cm);
  for (size_t i = 0; i < types.size(); ++i) {
    ReflexData R = reflex_field(types[i]);
    json emb = json::array();
    for (size_t j : types[i].phi) emb.push_back(complex_string(roots.roots[j], cfg.bits));
    json reflex = io::to_json(R.reflex);
    rep.add({{"record", "cm_type"},
             {"index", i},
             {"phi", types[i].phi},
             {"embeddings", emb},
             {"closure_degree", R.closure.L.field.degree()},
             {"galois_group", R.closure.group_name},
             {"reflex", reflex},
             {"reflex_degree", R.reflex.degree()},
             {"reflex_type", R.reflex_type.phi}});
    rep.note("type " + std::to_string(i) + " " + types[i].to_string() + ": reflex field of degree " +
             std::to_string(R.reflex.degree()) + ", " + R.reflex.min_poly().to_string());
  }
  rep.summary({{"cm", true}, {"types", types.size()}, {"galois_group", reflex_field(types[0]).closure.group_name}});
  return kOk;
}

// Feeds a deliberately wrong reflex-norm image through the
// norm-times-conjugate test; the test has to reject it.
json corrupted_ideal_record(const CMType& phi) {
  ReflexData R = reflex_field(phi);
  const Order& oR = R.reflex_type.cm.order;
  const Order& oE = phi.cm.order;
  PrimeIdeal pR;
  for (long p : primes_up_to(100)) {
    auto split = prime_split(p, oR);
    if (split.front().e == 1 && oR.disc() % p != 0) {
      pR = split.front();
      break;
    }
  }
  FracIdeal good = R.norm_ideal(pR.ideal);
  Integer other = pR.p == 2 ? 3 : 2;
  FracIdeal bad = good * prime_split(other, oE).front().ideal;
  Integer q = pow(pR.p, static_cast<unsigned long>(pR.f));
  FracIdeal want = FracIdeal::principal(oE, phi.cm.field.from_rational(q));
  bool good_ok = good * ideal_conjugate(good, phi.cm.conj) == want;
  bool bad_ok = bad * ideal_conjugate(bad, phi.cm.conj) == want;
  return {{"record", "identity"},
          {"name", "injected-corrupt-ideal"},
          {"checked", 2},
          {"failed", (good_ok ? 0 : 1) + (bad_ok ? 0 : 1)},
          {"witness", "p = " + pR.ideal.to_string() + ", image replaced by " + bad.to_string()},
          {"passed", good_ok && bad_ok}};
}

int cmd_reflex_verify(const RunConfig& cfg, Report& rep, long type_index, int samples, bool inject) {
  NumberField k = io::load_field(cfg.inputs.at(0));
  auto cm = cm_check(k);
  if (!cm) {
    std::cerr << "error: " << k.min_poly().to_string() << " is not a CM field\n";
    return kUsage;
  }
  auto types = enumerate_cm_types(*cm);
  if (type_index < 0 || static_cast<size_t>(type_index) >= types.size()) {
    std::cerr << "error: type index must be below " << types.size() << "\n";
    return kUsage;
  }
  const CMType& phi = types[static_cast<size_t>(type_index)];
  ReflexReport r = verify_reflex_identities(phi, NumberField(), samples, cfg.seed);
  long failed = 0, checked = 0;
  for (const auto& c : r.checks) {
    rep.add({{"record", "identity"},
             {"name", c.name},
             {"checked", c.checked},
             {"failed", c.failed},
             {"witness", c.witness},
             {"passed", c.passed()}});
    checked += c.checked;
    if (!c.passed()) {
      ++failed;
      rep.note("FAIL " + c.name + ": " + c.witness);
    }
  }
  if (inject) {
    json bad = corrupted_ideal_record(phi);
    checked += bad["checked"].get<long>();
    if (!bad["passed"].get<bool>()) {
      ++failed;
      rep.note("FAIL injected-corrupt-ideal: " + bad["witness"].get<std::string>());
    }
    rep.add(bad);
  }
  rep.summary({{"type", phi.phi}, {"checks", r.checks.size() + (inject ? 1 : 0)}, {"evaluations", checked},
               {"failed_checks", failed}, {"passed", failed == 0}});
  rep.note("type " + phi.to_string() + ": " + std::to_string(checked) + " evaluations, " + std::to_string(failed) +
           " failing checks");
  return failed == 0 ? kOk : kFailure;
}

int cmd_st(const RunConfig& cfg, Report& rep, long p_min, long p_max) {
  auto curves = io::load_curves(cfg.inputs.at(0));
  long pass = 0, fail_rows = 0, skipped = 0;
  for (const auto& c : curves) {
    CMType phi = identity_type(c.cm);
    for (long p : primes_up_to(p_max - 1)) {
      if (p < p_min) continue;
      json row{{"record", "st"}, {"curve", c.name}, {"p", p}};
      try {
        FrobeniusData F = frobenius_element(c, p, cfg.seed);
        FrobeniusData G = F;
        G.pi = c.cm.conj(F.pi);
        bool ideal_ok = st_check_ideal(F, phi, c.cm.field, F.prime_above);
        bool val_ok = st_check_valuations(F, phi, c.cm.field, F.prime_above).all_ok();
        bool swap_rejected = !st_check_ideal(G, phi, c.cm.field, F.prime_above);
        bool ok = ideal_ok && val_ok && swap_rejected;
        row["status"] = ok ? "pass" : "fail";
        row["a_p"] = io::to_json(F.trace);
        row["pi"] = io::to_json(F.pi);
        row["prime_above"] = io::to_json(F.prime_above);
        row["ideal_match"] = ideal_ok;
        row["valuation_match"] = val_ok;
        row["conjugate_rejected"] = swap_rejected;
        (ok ? pass : fail_rows) += 1;
        if (!ok) rep.note("FAIL " + c.name + " at p = " + std::to_string(p));
      } catch (const Error& e) {
        if (e.code() == Errc::Supersingular || e.code() == Errc::RamifiedPrime) {
          row["status"] = "skipped";
          row["reason"] = e.code() == Errc::Supersingular ? "supersingular" : "bad reduction";
          ++skipped;
        } else if (e.code() == Errc::IdentificationFailed) {
          row["status"] = "fail";
          row["reason"] = e.what();
          ++fail_rows;
          rep.note("FAIL " + c.name + " at p = " + std::to_string(p) + ": " + e.what());
        } else {
          throw;
        }
      }
      rep.add(row);
    }
  }
  rep.summary({{"curves", curves.size()}, {"pass", pass}, {"fail", fail_rows}, {"skipped", skipped},
               {"passed", fail_rows == 0}});
  rep.note(std::to_string(pass) + " rows pass, " + std::to_string(fail_rows) + " fail, " + std::to_string(skipped) +
           " skipped");
  return fail_rows == 0 ? kOk : kFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact computations with CM fields, reflex norms and CM elliptic curves"};
  app.require_subcommand(1);
  RunConfig cfg;
  long budget_flag = 0;
  app.add_option("--seed", cfg.seed, "Random seed")->capture_default_str();
  app.add_option("--bits", cfg.bits, "Precision of printed complex embeddings, in bits")->capture_default_str();
  app.add_option("--budget", budget_flag, "Enumeration node cap (otherwise CMREFLEX_BUDGET or 10^6)");
  app.add_option("--format", cfg.format, "records or summary")
      ->check(CLI::IsMember({"records", "summary"}))
      ->capture_default_str();

  std::string path;
  auto* cm = app.add_subcommand("cm", "CM test, CM-types and reflex data of a field");
  cm->add_option("field-file", path, "Field record")->required()->check(CLI::ExistingFile);

  long type_index = 0;
  int samples = 100;
  bool inject = false;
  auto* rv = app.add_subcommand("reflex-verify", "Reflex norm identity suite for one CM-type");
  rv->add_option("field-file", path, "Field record")->required()->check(CLI::ExistingFile);
  rv->add_option("--type-index", type_index, "Index into the enumerated CM-types")->capture_default_str();
  rv->add_option("--samples", samples, "Random element samples")->capture_default_str()->check(CLI::PositiveNumber);
  rv->add_flag("--inject-corrupt-ideal", inject, "Test mode: also check a deliberately wrong ideal");

  long p_min = 5, p_max = 1000;
  auto* st = app.add_subcommand("st", "Frobenius ideal formula on a CM curve corpus");
  st->add_option("corpus-file", path, "Curve corpus")->required()->check(CLI::ExistingFile);
  st->add_option("--p-min", p_min, "Smallest prime")->capture_default_str();
  st->add_option("--p-max", p_max, "Primes below this bound")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  if (budget_flag > 0) setenv("CMREFLEX_BUDGET", std::to_string(budget_flag).c_str(), 1);
  cfg.budget = default_budget();
  cfg.inputs = {path};
  if (cm->parsed()) {
    cfg.command = "cm";
  } else if (rv->parsed()) {
    cfg.command = "reflex-verify";
    cfg.params = {{"type_index", type_index}, {"samples", samples}, {"inject_corrupt_ideal", inject}};
  } else {
    cfg.command = "st";
    cfg.params = {{"p_min", p_min}, {"p_max", p_max}};
    if (p_max < p_min) {
      std::cerr << "error: --p-max must not be below --p-min\n";
      return kUsage;
    }
  }

  Report rep(cfg);
  int code = kOk;
  try {
    if (cfg.command == "cm") code = cmd_cm(cfg, rep);
    else if (cfg.command == "reflex-verify") code = cmd_reflex_verify(cfg, rep, type_index, samples, inject);
    else code = cmd_st(cfg, rep, p_min, p_max);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    switch (e.code()) {
      case Errc::Parse:
      case Errc::NotIrreducible:
      case Errc::InvalidArgument:
        return kUsage;
      case Errc::ClosureTooLarge:
        return kClosure;
      default:
        return kFailure;
    }
  }
  if (code == kUsage) return code;
  rep.emit();
  return code;
}
