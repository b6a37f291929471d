#include "psos/cli.hpp"

#include <CLI11.hpp>

#include <cctype>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>

#include "psos/analytic.hpp"
#include "psos/errors.hpp"
#include "psos/json_io.hpp"
#include "psos/measure.hpp"

namespace psos {

namespace {

// ---------------------------------------------------------------------
// expression evaluator for `padic eval`
//
// Grammar (polynomials in x; scalars are degree-0 polynomials):
//   expr    := term (('+'|'-') term)*
//   term    := unary (('*'|'/') unary)*
//   unary   := '-' unary | power
//   power   := primary ('^' '-'? NUMBER)?
//   primary := NUMBER | 'x' | IDENT '(' args ')' | '(' expr ')'
// Functions: exp, log, sqrt (scalar argument) and hensel(f, a0, i)
// with i a literal integer.  Rational and power literals ("1/2",
// "3^-2*5") fall out of the grammar.

struct Expr {
  std::vector<PadicNumber> c;  // low -> high, never empty
};

enum class Tok { number, ident, plus, minus, star, slash, caret, lparen, rparen, comma, end };

struct Token {
  Tok kind;
  std::string text;
};

std::vector<Token> tokenize(std::string_view src) {
  std::vector<Token> out;
  size_t i = 0;
  while (i < src.size()) {
    char ch = src[i];
    if (std::isspace(static_cast<unsigned char>(ch))) {
      ++i;
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(ch))) {
      size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      out.push_back({Tok::number, std::string(src.substr(i, j - i))});
      i = j;
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
      size_t j = i;
      while (j < src.size() &&
             (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_'))
        ++j;
      out.push_back({Tok::ident, std::string(src.substr(i, j - i))});
      i = j;
      continue;
    }
    Tok kind;
    switch (ch) {
      case '+': kind = Tok::plus; break;
      case '-': kind = Tok::minus; break;
      case '*': kind = Tok::star; break;
      case '/': kind = Tok::slash; break;
      case '^': kind = Tok::caret; break;
      case '(': kind = Tok::lparen; break;
      case ')': kind = Tok::rparen; break;
      case ',': kind = Tok::comma; break;
      default:
        throw ParseError(std::string("unexpected character '") + ch + "' in expression");
    }
    out.push_back({kind, std::string(1, ch)});
    ++i;
  }
  out.push_back({Tok::end, ""});
  return out;
}

class ExprParser {
 public:
  ExprParser(std::vector<Token> tokens, uint64_t p, int32_t prec)
      : tokens_(std::move(tokens)), p_(p), prec_(prec) {}

  Expr parse() {
    Expr e = parse_expr();
    expect(Tok::end, "end of expression");
    return e;
  }

 private:
  const Token& peek() const { return tokens_[pos_]; }
  Token take() { return tokens_[pos_++]; }
  void expect(Tok kind, const char* what) {
    if (peek().kind != kind) {
      throw ParseError(std::string("expected ") + what + " near '" + peek().text + "'");
    }
    ++pos_;
  }

  PadicNumber scalar_zero() const { return PadicNumber::zero(p_, prec_); }

  static bool is_scalar(const Expr& e) { return e.c.size() == 1; }

  Expr add(const Expr& a, const Expr& b, bool subtract) {
    Expr r;
    size_t n = std::max(a.c.size(), b.c.size());
    r.c.reserve(n);
    for (size_t i = 0; i < n; ++i) {
      if (i < a.c.size() && i < b.c.size()) {
        r.c.push_back(subtract ? a.c[i] - b.c[i] : a.c[i] + b.c[i]);
      } else if (i < a.c.size()) {
        r.c.push_back(a.c[i]);
      } else {
        r.c.push_back(subtract ? -b.c[i] : b.c[i]);
      }
    }
    return r;
  }

  Expr mul(const Expr& a, const Expr& b) {
    if (a.c.size() + b.c.size() - 2 > 64) throw ParseError("polynomial degree cap exceeded");
    std::vector<std::optional<PadicNumber>> acc(a.c.size() + b.c.size() - 1);
    for (size_t i = 0; i < a.c.size(); ++i) {
      for (size_t j = 0; j < b.c.size(); ++j) {
        PadicNumber t = a.c[i] * b.c[j];
        if (acc[i + j]) {
          acc[i + j] = *acc[i + j] + t;
        } else {
          acc[i + j] = std::move(t);
        }
      }
    }
    Expr r;
    for (auto& slot : acc) r.c.push_back(std::move(*slot));
    return r;
  }

  Expr parse_expr() {
    Expr e = parse_term();
    while (peek().kind == Tok::plus || peek().kind == Tok::minus) {
      bool subtract = take().kind == Tok::minus;
      e = add(e, parse_term(), subtract);
    }
    return e;
  }

  Expr parse_term() {
    Expr e = parse_unary();
    while (peek().kind == Tok::star || peek().kind == Tok::slash) {
      bool divide = take().kind == Tok::slash;
      Expr rhs = parse_unary();
      if (divide) {
        if (!is_scalar(rhs)) throw ParseError("division by a polynomial is not supported");
        Expr r;
        for (const PadicNumber& ci : e.c) r.c.push_back(ci / rhs.c[0]);
        e = std::move(r);
      } else {
        e = mul(e, rhs);
      }
    }
    return e;
  }

  Expr parse_unary() {
    if (peek().kind == Tok::minus) {
      ++pos_;
      Expr e = parse_unary();
      for (PadicNumber& ci : e.c) ci = -ci;
      return e;
    }
    return parse_power();
  }

  Expr parse_power() {
    Expr base = parse_primary();
    if (peek().kind != Tok::caret) return base;
    ++pos_;
    bool negative = false;
    if (peek().kind == Tok::minus) {
      negative = true;
      ++pos_;
    }
    if (peek().kind != Tok::number) throw ParseError("exponent must be an integer literal");
    long e = std::stol(take().text);
    if (is_scalar(base)) {
      PadicNumber v = base.c[0];
      PadicNumber r = negative ? v.inverse().pow(static_cast<uint64_t>(e))
                               : v.pow(static_cast<uint64_t>(e));
      return Expr{{std::move(r)}};
    }
    if (negative) throw ParseError("negative power of a polynomial");
    Expr r{{PadicNumber::one(p_, prec_)}};
    for (long t = 0; t < e; ++t) r = mul(r, base);
    return r;
  }

  Expr parse_primary() {
    Token tok = take();
    switch (tok.kind) {
      case Tok::number:
        return Expr{{PadicNumber::from_integer(p_, mpz_class(tok.text), prec_)}};
      case Tok::lparen: {
        Expr e = parse_expr();
        expect(Tok::rparen, "')'");
        return e;
      }
      case Tok::ident: {
        if (tok.text == "x") {
          return Expr{{scalar_zero(), PadicNumber::one(p_, prec_)}};
        }
        expect(Tok::lparen, "'(' after function name");
        if (tok.text == "exp" || tok.text == "log" || tok.text == "sqrt") {
          Expr arg = parse_expr();
          expect(Tok::rparen, "')'");
          if (!is_scalar(arg)) throw ParseError(tok.text + " needs a scalar argument");
          PadicNumber v = arg.c[0];
          if (tok.text == "exp") return Expr{{exp_p(v)}};
          if (tok.text == "log") return Expr{{log_p(v)}};
          return Expr{{psos::sqrt(v)}};
        }
        if (tok.text == "hensel") {
          Expr f = parse_expr();
          expect(Tok::comma, "','");
          Expr a0 = parse_expr();
          expect(Tok::comma, "','");
          if (peek().kind != Tok::number) {
            throw ParseError("hensel index must be an integer literal");
          }
          long index = std::stol(take().text);
          expect(Tok::rparen, "')'");
          if (!is_scalar(a0)) throw ParseError("hensel start must be a scalar");
          if (index < 0) throw ParseError("hensel index must be >= 0");
          PadicNumber root =
              hensel_lift(PadicPoly(f.c), a0.c[0], static_cast<unsigned>(index), prec_);
          return Expr{{std::move(root)}};
        }
        throw ParseError("unknown function: " + tok.text);
      }
      default:
        throw ParseError("unexpected token '" + tok.text + "'");
    }
  }

  std::vector<Token> tokens_;
  size_t pos_ = 0;
  uint64_t p_;
  int32_t prec_;
};

PadicNumber evaluate_expression(uint64_t p, const std::string& text, int32_t prec) {
  ExprParser parser(tokenize(text), p, prec);
  Expr e = parser.parse();
  if (e.c.size() != 1) {
    throw ParseError("expression must evaluate to a scalar, not a polynomial");
  }
  return e.c[0];
}

// ---------------------------------------------------------------------
// option plumbing

struct Options {
  uint64_t p = 3;
  unsigned k = 2;
  unsigned m = 2;
  std::string theta;
  std::string coupling;
  int32_t precision = default_precision;
  std::string format = "json";
  std::string out_path;
  std::string expr;
  unsigned level = 1;
  unsigned levels = 2;
  std::string field_csv;
  std::string field_json;
  uint64_t cap = default_enumeration_cap;
  std::string region = "ball";
  bool with_configs = false;
  std::string config_path;
};

// Expands `--config FILE` (key=value lines, # comments) into ordinary
// options appended after the explicit ones; explicit flags win.
std::vector<std::string> apply_config_file(const std::vector<std::string>& args) {
  std::string path;
  for (size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      path = args[i + 1];
    } else if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
    }
  }
  if (path.empty()) return args;
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open config file: " + path);
  std::vector<std::string> out = args;
  std::string line;
  while (std::getline(in, line)) {
    size_t comment = line.find('#');
    if (comment != std::string::npos) line.erase(comment);
    auto strip = [](std::string s) {
      size_t b = s.find_first_not_of(" \t\r");
      size_t e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    line = strip(line);
    if (line.empty()) continue;
    size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw ParseError("config line is not key=value: '" + line + "'");
    }
    std::string key = strip(line.substr(0, eq));
    std::string value = strip(line.substr(eq + 1));
    if (key.empty()) throw ParseError("empty key in config file");
    std::string flag = "--" + key;
    bool already = false;
    for (const std::string& arg : args) {
      if (arg == flag || arg.rfind(flag + "=", 0) == 0) already = true;
    }
    if (already) continue;
    if (value == "true") {
      out.push_back(flag);
    } else if (value == "false") {
      continue;
    } else {
      out.push_back(flag);
      out.push_back(value);
    }
  }
  return out;
}

mpq_class parse_rational(const std::string& text) {
  mpq_class q;
  if (q.set_str(text, 10) != 0) {
    throw ParseError("bad rational literal: '" + text + "'");
  }
  q.canonicalize();
  return q;
}

ModelParams make_params(const Options& opt, int32_t precision) {
  bool has_theta = !opt.theta.empty();
  bool has_coupling = !opt.coupling.empty();
  if (has_theta == has_coupling) {
    throw ParseError("exactly one of --theta and --coupling must be given");
  }
  if (has_theta) {
    return ModelParams::from_theta_rational(opt.p, opt.k, opt.m, parse_rational(opt.theta),
                                            precision);
  }
  return ModelParams::from_coupling_rational(opt.p, opt.k, opt.m, parse_rational(opt.coupling),
                                             precision);
}

std::vector<std::string> split_csv(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : text) {
    if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  out.push_back(cur);
  return out;
}

// Builds the working field at the requested precision; `rebuildable`
// reports whether a precision raise can be honored.
struct FieldSource {
  std::function<BoundaryField(const ModelParams&)> build;
  bool rebuildable = true;
};

FieldSource field_source(const Options& opt, FieldCheck check) {
  if (!opt.field_csv.empty() && !opt.field_json.empty()) {
    throw ParseError("give at most one of --field and --field-json");
  }
  if (!opt.field_csv.empty()) {
    std::vector<std::string> parts = split_csv(opt.field_csv);
    return FieldSource{
        [parts, check](const ModelParams& params) {
          std::vector<PadicNumber> values;
          values.reserve(parts.size());
          for (const std::string& part : parts) {
            values.push_back(PadicNumber::from_rational(params.prime(), parse_rational(part),
                                                        params.precision()));
          }
          return BoundaryField::translation_invariant(std::move(values), check);
        },
        true};
  }
  if (!opt.field_json.empty()) {
    std::string path = opt.field_json;
    return FieldSource{
        [path, check](const ModelParams&) {
          std::ifstream in(path);
          if (!in) throw ParseError("cannot open field file: " + path);
          nlohmann::json j = nlohmann::json::parse(in, nullptr, true);
          return field_from_json(j, check);
        },
        false};
  }
  // no explicit field: solve for one
  return FieldSource{
      [](const ModelParams& params) -> BoundaryField {
        if (!params.prime_divides_spin_count()) return solve_ti_unique(params);
        if (params.spin_max() == 2) {
          Z0BranchResult z0 = solve_z0_equal_1_branch(params);
          if (!z0.solutions.empty()) return z0.solutions.front();
          if (params.order() == 2 && params.prime() != 2) {
            QuarticBranchResult quartic = solve_three_state_k2_p3(params);
            if (!quartic.solutions.empty()) return quartic.solutions.front().field;
          }
        }
        throw DomainError("no boundary law available for these parameters; supply --field");
      },
      true};
}

// Raised-precision copies of params/field for measure work when
// p | m+1: the quotient by Z_n costs 2 v_p(Z_n) absolute digits.
std::pair<ModelParams, BoundaryField> lift_for_measures(const ModelParams& params,
                                                        const FieldSource& source,
                                                        unsigned n, uint64_t cap) {
  BoundaryField field = source.build(params);
  if (!params.prime_divides_spin_count() || !source.rebuildable) {
    return {params, std::move(field)};
  }
  TreeVolume vol(params.order(), n);
  PadicNumber z = partition_function(field, vol, params, cap);
  if (z.is_zero()) {
    throw PrecisionExhaustedError("partition function vanished while sizing the precision lift");
  }
  int64_t drop = z.valuation();
  if (drop == 0) return {params, std::move(field)};
  int32_t lifted = params.precision() + static_cast<int32_t>(2 * drop) + 16;
  ModelParams hi = params.with_precision(lifted);
  return {hi, source.build(hi)};
}

void write_output(const Options& opt, std::ostream& out, const nlohmann::json& j,
                  const std::function<void(std::ostream&)>& text) {
  std::ostringstream buffer;
  if (opt.format == "json") {
    buffer << j.dump(2) << "\n";
  } else if (opt.format == "text") {
    text(buffer);
  } else {
    throw ParseError("unknown format: " + opt.format);
  }
  if (opt.out_path.empty()) {
    out << buffer.str();
  } else {
    std::ofstream file(opt.out_path, std::ios::binary);
    if (!file) throw ParseError("cannot open output file: " + opt.out_path);
    file << buffer.str();
  }
}

void add_model_options(CLI::App* cmd, Options& opt) {
  cmd->add_option("--config", opt.config_path, "read options from a key=value file");
  cmd->add_option("--p", opt.p, "prime");
  cmd->add_option("--k", opt.k, "tree order");
  cmd->add_option("--m", opt.m, "largest spin (m+1 states)");
  cmd->add_option("--theta", opt.theta, "Boltzmann weight as a rational, e.g. 28 or 13/4");
  cmd->add_option("--coupling", opt.coupling, "coupling constant J as a rational");
  cmd->add_option("--precision", opt.precision, "tracked base-p digits");
}

void add_output_options(CLI::App* cmd, Options& opt) {
  cmd->add_option("--format", opt.format, "json or text");
  cmd->add_option("--out", opt.out_path, "write the report to a file");
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options opt;
  CLI::App app{"exact p-adic solid-on-solid model toolkit"};
  app.require_subcommand(1);

  CLI::App* padic_cmd = app.add_subcommand("padic", "raw p-adic calculations");
  CLI::App* padic_eval = padic_cmd->add_subcommand("eval", "evaluate an expression in Q_p");
  padic_eval->add_option("--config", opt.config_path, "read options from a key=value file");
  padic_eval->add_option("--p", opt.p, "prime");
  padic_eval->add_option("--expr", opt.expr, "expression, e.g. 'sqrt(7)' or 'hensel(x^2-7,1,0)'")
      ->required();
  padic_eval->add_option("--precision", opt.precision, "tracked base-p digits");
  add_output_options(padic_eval, opt);

  CLI::App* solve_cmd = app.add_subcommand("solve", "boundary-law solvers");
  CLI::App* solve_ti = solve_cmd->add_subcommand("ti", "unique TI solution (p not dividing m+1)");
  add_model_options(solve_ti, opt);
  add_output_options(solve_ti, opt);
  CLI::App* solve_three =
      solve_cmd->add_subcommand("three-state", "all m=2 branch solvers (z0=1 and z0!=1)");
  add_model_options(solve_three, opt);
  add_output_options(solve_three, opt);

  CLI::App* certify_cmd = app.add_subcommand("certify", "uniqueness / phase-transition certificate");
  add_model_options(certify_cmd, opt);
  add_output_options(certify_cmd, opt);

  CLI::App* measure_cmd = app.add_subcommand("measure", "finite-volume measures");
  CLI::App* measure_eval = measure_cmd->add_subcommand("eval", "tabulate mu^(n)");
  add_model_options(measure_eval, opt);
  add_output_options(measure_eval, opt);
  measure_eval->add_option("--n", opt.level, "volume radius");
  measure_eval->add_option("--field", opt.field_csv, "TI field as comma-separated rationals");
  measure_eval->add_option("--field-json", opt.field_json, "field JSON file");
  measure_eval->add_option("--cap", opt.cap, "enumeration cap");
  CLI::App* measure_compat =
      measure_cmd->add_subcommand("check-compat", "brute-force marginal consistency");
  add_model_options(measure_compat, opt);
  add_output_options(measure_compat, opt);
  measure_compat->add_option("--n", opt.level, "level checked against level n-1");
  measure_compat->add_option("--field", opt.field_csv, "TI field as comma-separated rationals");
  measure_compat->add_option("--field-json", opt.field_json, "field JSON file");
  measure_compat->add_option("--cap", opt.cap, "enumeration cap");

  CLI::App* tree_cmd = app.add_subcommand("tree", "tree geometry");
  CLI::App* tree_dump = tree_cmd->add_subcommand("dump", "volume structure as JSON");
  tree_dump->add_option("--config", opt.config_path, "read options from a key=value file");
  tree_dump->add_option("--k", opt.k, "tree order");
  tree_dump->add_option("--n", opt.level, "volume radius");
  tree_dump->add_option("--m", opt.m, "largest spin, for --with-configs");
  tree_dump->add_option("--region", opt.region, "ball or sphere, for --with-configs");
  tree_dump->add_flag("--with-configs", opt.with_configs, "include the spin configurations");
  tree_dump->add_option("--cap", opt.cap, "enumeration cap");
  add_output_options(tree_dump, opt);

  CLI::App* classify_cmd = app.add_subcommand("classify", "measure classification");
  CLI::App* classify_bound = classify_cmd->add_subcommand("boundedness", "boundedness dichotomy");
  add_model_options(classify_bound, opt);
  add_output_options(classify_bound, opt);
  classify_bound->add_option("--levels", opt.levels, "levels measured (1..levels)");
  classify_bound->add_option("--field", opt.field_csv, "TI field as comma-separated rationals");
  classify_bound->add_option("--field-json", opt.field_json, "field JSON file");
  classify_bound->add_option("--cap", opt.cap, "enumeration cap");

  std::vector<std::string> argv_storage;
  try {
    argv_storage = apply_config_file(args);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  argv_storage.insert(argv_storage.begin(), "psos");
  std::vector<char*> argv;
  argv.reserve(argv_storage.size());
  for (std::string& s : argv_storage) argv.push_back(s.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (padic_eval->parsed()) {
      PadicNumber value = evaluate_expression(opt.p, opt.expr, opt.precision);
      write_output(opt, out, to_json(value),
                   [&](std::ostream& os) { os << value.to_string(opt.precision) << "\n"; });
      return 0;
    }

    if (solve_ti->parsed()) {
      ModelParams params = make_params(opt, opt.precision);
      TiSolveStats stats;
      std::vector<PadicNumber> start(params.spin_count(),
                                     PadicNumber::one(params.prime(), params.precision()));
      BoundaryField field = solve_ti_unique(params, start, &stats);
      nlohmann::json j;
      j["params"] = to_json(params);
      j["field"] = to_json(field);
      j["iterations"] = stats.iterations;
      write_output(opt, out, j, [&](std::ostream& os) {
        os << "unique TI boundary law (" << stats.iterations << " iterations)\n";
        for (const PadicNumber& z : field.ti_values()) os << "  " << z.to_string() << "\n";
      });
      return 0;
    }

    if (solve_three->parsed()) {
      if (solve_three->count("--m") > 0 && opt.m != 2) {
        throw ParseError("solve three-state is the m = 2 analysis; drop --m or pass 2");
      }
      opt.m = 2;
      ModelParams params = make_params(opt, opt.precision);
      Z0BranchResult z0 = solve_z0_equal_1_branch(params);
      nlohmann::json j;
      j["params"] = to_json(params);
      nlohmann::json jz0;
      nlohmann::json roots = nlohmann::json::array();
      for (const HenselRoot& root : z0.roots) {
        nlohmann::json r;
        r["residue"] = root.residue;
        r["index"] = root.index;
        r["start"] = root.start;
        r["x"] = to_json(root.x);
        roots.push_back(r);
      }
      jz0["roots"] = roots;
      nlohmann::json sols = nlohmann::json::array();
      for (const BoundaryField& f : z0.solutions) sols.push_back(to_json(f));
      jz0["solutions"] = sols;
      nlohmann::json scans = nlohmann::json::array();
      for (const ResidueScan& scan : z0.residues) {
        nlohmann::json s;
        s["residue"] = scan.residue;
        s["outcome"] = scan.outcome == ResidueOutcome::lifted
                           ? "lifted"
                           : (scan.outcome == ResidueOutcome::excluded ? "excluded"
                                                                       : "inconclusive");
        scans.push_back(s);
      }
      jz0["residues"] = scans;
      jz0["rejected"] = z0.rejected;
      j["z0_eq_1"] = jz0;
      if (params.prime() != 2 && params.order() == 2) {
        QuarticBranchResult quartic = solve_three_state_k2_p3(params);
        nlohmann::json jq;
        nlohmann::json qs = nlohmann::json::array();
        for (const QuarticSolution& sol : quartic.solutions) {
          nlohmann::json s;
          s["field"] = to_json(sol.field);
          s["x"] = to_json(sol.x);
          s["y"] = to_json(sol.y);
          s["sqrt_D_sign"] = sol.sign;
          qs.push_back(s);
        }
        jq["solutions"] = qs;
        jq["diagnostics"] = to_json(quartic.diag);
        j["z0_ne_1"] = jq;
      } else {
        j["z0_ne_1"] = {{"skipped", "needs k = 2 and an odd prime"}};
      }
      write_output(opt, out, j, [&](std::ostream& os) {
        os << "z0=1 branch: " << z0.solutions.size() << " solution(s)\n";
        if (j.contains("z0_ne_1") && j["z0_ne_1"].contains("solutions")) {
          os << "z0!=1 branch: " << j["z0_ne_1"]["solutions"].size() << " solution(s)\n";
        }
      });
      return 0;
    }

    if (tree_dump->parsed()) {
      TreeVolume vol(opt.k, opt.level);
      nlohmann::json j = to_json(vol);
      if (opt.with_configs) {
        Region region;
        if (opt.region == "ball") {
          region = Region::ball;
        } else if (opt.region == "sphere") {
          region = Region::sphere;
        } else {
          throw ParseError("unknown region: " + opt.region);
        }
        nlohmann::json configs = nlohmann::json::array();
        ConfigEnumerator en(vol, opt.m, region, opt.level, opt.cap);
        for (; en.valid(); en.advance()) configs.push_back(en.config().spins);
        j["configs"] = configs;
        j["region"] = opt.region;
      }
      write_output(opt, out, j, [&](std::ostream& os) {
        os << "V_" << opt.level << " of the order-" << opt.k << " tree: "
           << vol.vertex_count() << " vertices\n";
      });
      return 0;
    }

    if (certify_cmd->parsed()) {
      ModelParams params = make_params(opt, opt.precision);
      GibbsCertificate cert = certify(params);
      write_output(opt, out, to_json(cert), [&](std::ostream& os) {
        os << "verdict: " << to_string(cert.verdict) << "\n";
        os << "boundedness: " << (cert.bounded ? "bounded" : "unbounded") << "\n";
        os << "solutions: " << cert.solutions.size() << "\n";
        for (const SolutionRecord& rec : cert.solutions) {
          os << "  - " << rec.provenance << "\n";
          for (const PadicNumber& z : rec.field.ti_values()) {
            os << "      " << z.to_string() << "\n";
          }
        }
        for (const std::string& note : cert.notes) os << "note: " << note << "\n";
      });
      return 0;
    }

    if (measure_eval->parsed()) {
      ModelParams params = make_params(opt, opt.precision);
      FieldSource source = field_source(opt, FieldCheck::units_only);
      auto [hi, field] = lift_for_measures(params, source, opt.level, opt.cap);
      TreeVolume vol(hi.order(), opt.level);
      MeasureTable table = measure_table(field, vol, hi, opt.cap);
      nlohmann::json j = to_json(table, vol, hi);
      j["params"] = to_json(hi);
      write_output(opt, out, j, [&](std::ostream& os) {
        os << "Z_" << opt.level << " = " << table.partition->to_string() << "\n";
        os << "entries: " << table.mu.size() << "\n";
      });
      return 0;
    }

    if (measure_compat->parsed()) {
      ModelParams params = make_params(opt, opt.precision);
      FieldSource source = field_source(opt, FieldCheck::units_only);
      auto [hi, field] = lift_for_measures(params, source, opt.level, opt.cap);
      CompatibilityReport report =
          check_compatibility(field, hi, opt.level, opt.cap, verify_slack, opt.precision);
      nlohmann::json j = to_json(report);
      j["n"] = opt.level;
      write_output(opt, out, j, [&](std::ostream& os) {
        os << (report.pass ? "compatible" : "NOT compatible") << " at n = " << opt.level
           << " (max residual exponent " << report.max_residual_exp << ", threshold "
           << report.threshold_exp << ")\n";
      });
      return 0;
    }

    if (classify_bound->parsed()) {
      ModelParams params = make_params(opt, opt.precision);
      std::optional<BoundaryField> field;
      if (!opt.field_csv.empty() || !opt.field_json.empty()) {
        field = field_source(opt, FieldCheck::units_only).build(params);
      }
      BoundednessReport report = classify_boundedness(params, field, opt.levels, opt.cap);
      write_output(opt, out, to_json(report), [&](std::ostream& os) {
        os << "class: " << (report.bounded ? "bounded" : "unbounded") << "\n";
        for (const BoundednessLevelData& level : report.levels) {
          os << "  n=" << level.n << ": v(Z)=" << level.partition_valuation
             << " |mu| in [p^" << level.mu_norm_exp_min << ", p^" << level.mu_norm_exp_max
             << "]\n";
        }
      });
      return 0;
    }
  } catch (const PrecisionExhaustedError& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  } catch (const NonConvergenceError& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  } catch (const CapExceededError& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  err << "error: no subcommand\n";
  return 2;
}

}  // namespace psos
