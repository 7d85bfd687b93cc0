#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include "scottkit/corpus.hpp"
#include "scottkit/forcing.hpp"
#include "scottkit/generic.hpp"
#include "scottkit/hardness.hpp"
#include "scottkit/scott.hpp"
#include "scottkit/tree_bf.hpp"

using namespace scottkit;

namespace {

// Input problems (files, syntax, inconsistent options) exit with 2.
class UsageError : public Error {
 public:
  using Error::Error;
};

struct Options {
  std::string in, other, out, format = "text";
  std::string formula, set = "cofinite:";
  int alpha = 1, depth = -1, width = 2, budget = 100000, jobs = 1;
  int node = 0, length = 1, centers = 3, stage = 4, level = 0, max_size = 6, check = 0, size = 3;
  bool weak = false, witnesses = false, nu = false, alpha_given = false;
};

std::string read_file(const std::string& path) {
  if (path.empty()) throw UsageError("missing --in");
  std::ifstream f(path);
  if (!f) throw UsageError("cannot open " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::string first_content_line(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    const auto p = line.find_first_not_of(" \t\r");
    if (p == std::string::npos || line[p] == '#') continue;
    return line.substr(p);
  }
  return "";
}

bool is_tree_text(const std::string& text) { return first_content_line(text).rfind("tree", 0) == 0; }

Structure structure_in(const std::string& path) { return parse_structure(read_file(path)); }
LabeledTree tree_in(const std::string& path) { return parse_tree(read_file(path)); }

void emit(const Options& o, const std::string& text) {
  if (o.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(o.out);
  if (!f) throw UsageError("cannot write " + o.out);
  f << text;
}

std::string yes(bool b) { return b ? "yes" : "no"; }

std::string ids(const LabeledTree& t, const std::vector<int>& nodes) {
  std::string s;
  for (std::size_t i = 0; i < nodes.size(); ++i) s += (i ? " " : "") + std::to_string(t.node(nodes[i]).id);
  return s;
}

std::string requirement_text(const LabeledTree& t, const Requirement& r) {
  return "W(" + std::to_string(t.node(r.nu).id) + "," + std::to_string(t.node(r.tau).id) + "," + std::to_string(r.beta) +
         ")";
}

// ---------------------------------------------------------------- subcommands

void cmd_parse(const Options& o) {
  const std::string text = read_file(o.in);
  const std::string head = first_content_line(text);
  if (head.rfind("tree", 0) == 0) {
    std::cout << format_tree(parse_tree(text));
  } else if (!head.empty() && head[0] == '(') {
    const Formula f = parse_formula(text);
    std::cout << to_sexpr(f) << "\n" << complexity_name(classify(f)) << "\n";
  } else {
    const Structure s = parse_structure(text);
    if (o.format == "sexpr") {
      Tuple all(s.size());
      for (int i = 0; i < s.size(); ++i) all[i] = i;
      std::cout << to_sexpr(type_formula(atomic_diagram(s, all))) << "\n";
    } else {
      std::cout << format_structure(s);
    }
  }
}

void cmd_orbits(const Options& o) {
  const Structure s = structure_in(o.in);
  if (o.length < 0 || o.length > s.size()) throw UsageError("--length must be between 0 and the domain size");
  const OrbitPartition op = automorphism_orbits(s, o.length);
  if (o.format == "csv") {
    std::cout << "tuple,orbit\n";
    for (std::size_t i = 0; i < op.tuples.size(); ++i) std::cout << tuple_text(op.tuples[i]) << ',' << op.class_of[i] << "\n";
    return;
  }
  std::cout << "orbits of length " << o.length << ": " << op.classes.size() << "\n";
  for (std::size_t c = 0; c < op.classes.size(); ++c) {
    std::cout << "orbit " << c << ":";
    for (int i : op.classes[c]) std::cout << ' ' << tuple_text(op.tuples[i]);
    std::cout << "\n";
  }
}

void cmd_bf(const Options& o) {
  const Structure s = structure_in(o.in);
  const Structure t = o.other.empty() ? s : structure_in(o.other);
  if (o.alpha < 0) throw UsageError("--alpha must be nonnegative");
  const BFTable table(s, t, o.alpha, -1, o.jobs);
  if (o.format == "csv") {
    table.write_csv(std::cout);
    return;
  }
  for (int n = 0; n <= o.alpha; ++n)
    std::cout << "level " << n << ": left <= right " << yes(table.le({}, {}, n)) << ", right <= left "
              << yes(table.ge({}, {}, n)) << "\n";
  std::cout << "stable level: " << table.stable_level() << "\n";
}

void cmd_rank(const Options& o) {
  const Structure s = structure_in(o.in);
  const RankReport r = scott_rank_report(s, 1, o.jobs);
  std::cout << r.rank << "\n";
  if (o.witnesses) {
    std::cout << "method " << r.method << "\n";
    for (const auto& [a, w] : r.witnesses)
      std::cout << "orbit " << tuple_text(a) << ": beta=" << w.beta << " parameters " << tuple_text(w.b) << "\n";
  }
  if (o.format == "sexpr")
    for (const auto& [a, w] : r.witnesses) std::cout << to_sexpr(defining_sigma_formula(s, a, r.rank)) << "\n";
}

void cmd_embed(const Options& o) {
  const Structure s = structure_in(o.in);
  const int depth = o.depth < 0 ? s.size() : o.depth;
  const LabeledTree t = embed_tree(s, depth, o.width);
  std::set<Tuple> tuples;
  for (const auto& n : t.nodes()) tuples.insert(n.tuple);
  if (o.out.empty()) {
    std::cout << format_tree(t);
    return;
  }
  emit(o, format_tree(t));
  std::cout << "nodes " << t.size() << "\ntuples " << tuples.size() << "\nclosed " << yes(t.closed()) << "\n";
}

void cmd_check_tree(const Options& o) {
  const LabeledTree t = tree_in(o.in);
  const Membership m = membership_verdict(t, o.alpha, o.nu ? AgreementBase::Nu : AgreementBase::Sigma);
  for (const auto& r : m.verdict.results) {
    std::cout << (r.pass ? "pass " : "fail ") << r.name;
    if (!r.pass && !r.witness.empty()) std::cout << " " << r.witness;
    std::cout << "\n";
  }
  const std::string cls = "T^" + std::to_string(o.alpha);
  if (m.member)
    std::cout << "member of " << cls << " (within budget)\n";
  else
    std::cout << "not a member of " << cls << ": " << m.reason << " (within budget)\n";
  std::cout << "note: " << m.note << "\n";
}

void cmd_force(const Options& o) {
  const LabeledTree t = tree_in(o.in);
  if (o.formula.empty()) throw UsageError("missing --formula");
  const Formula psi = parse_formula(o.formula);
  const int node = t.find_id(o.node);
  const bool v = o.weak ? weakly_forces(t, node, psi) : forces(t, node, psi);
  std::cout << (v ? "true" : "false") << "\n";
}

void cmd_emit_axioms(const Options& o) {
  const Structure s = structure_in(o.in);
  const int depth = o.depth < 0 ? s.size() : o.depth;
  if (depth > s.size()) throw UsageError("--depth exceeds the domain size");
  const int rank = s.size() == 0 ? 1 : scott_rank(s);
  std::vector<Formula> inv;
  std::string meta;
  if (rank < o.alpha) {
    for (int len = 1; len <= depth; ++len) {
      const OrbitPartition op = automorphism_orbits(s, len);
      for (const auto& cls : op.classes) {
        const Tuple& a = op.tuples[cls.front()];
        inv.push_back(defining_sigma_formula(s, a, rank));
        meta += "; inventory " + tuple_text(a) + " " + complexity_name(classify(inv.back())) + "\n";
      }
    }
  } else {
    meta += "; inventory empty: orbit-defining formulas have rank " + std::to_string(rank) + "\n";
  }
  const TreeSignature ts = tree_signature(s.signature_ptr(), depth);
  const std::optional<Formula> scott = s.size() > 0 ? std::optional<Formula>(scott_sentence(s)) : std::nullopt;
  const Formula ax = emit_axioms(o.alpha, inv, scott, ts, o.width);
  std::string text = "; alpha " + std::to_string(o.alpha) + " depth " + std::to_string(depth) + " width " +
                     std::to_string(o.width) + "\n" + meta + "; " + complexity_name(classify(ax)) + "\n" + to_sexpr(ax) +
                     "\n";
  emit(o, text);
}

void cmd_generic(const Options& o) {
  const LabeledTree t = tree_in(o.in);
  const GenericPath p = build_generic_path(t, t.find_id(o.node), o.alpha, o.budget);
  std::cout << "path " << ids(t, p.nodes) << "\n";
  std::cout << "generic " << yes(p.generic) << " (" << p.note << ")\n";
  std::cout << "served " << p.served.size() << "\n";
  for (const auto& r : p.unmet) std::cout << "unmet " << requirement_text(t, r) << "\n";
  const std::string s = format_structure(extract_structure(t, p.nodes));
  if (o.out.empty())
    std::cout << s;
  else
    emit(o, s);
}

void cmd_iso(const Options& o) {
  if (o.other.empty()) throw UsageError("missing --other");
  const std::string a = read_file(o.in), b = read_file(o.other);
  if (is_tree_text(a) != is_tree_text(b)) throw UsageError("--in and --other must both be trees or both structures");
  if (!is_tree_text(a)) {
    const Structure s = parse_structure(a), t = parse_structure(b);
    const bool iso = s.size() == t.size() && find_isomorphism(s, t).has_value();
    std::cout << (iso ? "isomorphic" : "not isomorphic") << "\n";
    return;
  }
  const LabeledTree s = parse_tree(a), t = parse_tree(b);
  std::cout << (tree_iso(s, t) ? "isomorphic" : "not isomorphic") << "\n";
  if (o.alpha_given) {
    const GoodMatchResult m = good_match_verify(s, t, o.alpha);
    std::cout << "good match at " << o.alpha << ": " << yes(m.ok) << "\n";
    for (const auto& line : m.trace) std::cout << "  " << line << "\n";
  }
}

void cmd_daisy(const Options& o) {
  const EnumeratedSet w = EnumeratedSet::parse(o.set);
  const DaisyClassification d = classify_daisy(w);
  std::cout << "set " << w.text() << "\nrank " << d.rank << "\n";
  for (const auto& line : d.certificate) std::cout << "  " << line << "\n";
  if (!o.out.empty()) {
    emit(o, format_structure(daisy_bunch(w, o.centers, o.stage)));
    for (int c = 0; c < o.centers; ++c) {
      std::cout << "center " << c << " petals";
      for (int l : petal_lengths(w, c, o.stage)) std::cout << ' ' << l;
      std::cout << "\n";
    }
  }
}

void print_pair(const SurrogatePair& p) {
  std::cout << "level " << p.k << "\nrigid " << yes(p.rigid) << "\n# G\n"
            << format_structure(p.g) << "# H\n"
            << format_structure(p.h);
}

void cmd_surrogate(const Options& o) { print_pair(find_surrogate_pair(o.level, o.max_size)); }

void cmd_code(const Options& o) {
  const Structure a = structure_in(o.in);
  const SurrogatePair pair = find_surrogate_pair(o.level, o.max_size);
  const Structure b = code_structure(a, pair, o.width);
  if (o.check == 0) {
    emit(o, format_structure(b));
    return;
  }
  if (!o.out.empty()) emit(o, format_structure(b));
  const CodingReport r = verify_coding_bf(a, pair, o.check);
  std::cout << "pair level " << pair.k << " sizes " << pair.g.size() << "," << pair.h.size() << "\n";
  std::cout << "checked " << r.checked << "\nviolations " << r.violations.size() << "\n";
  for (const auto& v : r.violations) std::cout << "  " << v << "\n";
  std::cout << "rank A " << r.rank_a << ", rank B " << r.rank_b << ", shift " << yes(r.rank_shift) << "\n";
}

int cmd_corpus(const Options& o) {
  const auto rows = run_corpus(o.size, o.jobs);
  bool ok = true;
  if (o.format == "csv") std::cout << "suite,checked,failures,status\n";
  for (const auto& r : rows) {
    ok = ok && r.pass();
    if (o.format == "csv") {
      std::cout << r.name << ',' << r.checked << ',' << r.failures << ',' << (r.pass() ? "pass" : "fail") << "\n";
      continue;
    }
    std::cout << (r.pass() ? "pass " : "fail ") << r.name << " (" << r.checked << " checks, " << r.failures
              << " failures)\n";
    if (!r.pass()) std::cout << "  first failure: " << r.first_failure << "\n";
  }
  if (o.format != "csv") std::cout << (ok ? "all suites pass" : "some suites fail") << "\n";
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Back-and-forth relations, Scott ranks and trees of tuples for finite structures"};
  app.require_subcommand(1);
  app.fallthrough();
  Options o;
  app.add_option("--in", o.in, "input file");
  app.add_option("--other", o.other, "second input file (bf, iso)");
  app.add_option("--out", o.out, "output file");
  app.add_option("--alpha", o.alpha, "level");
  app.add_option("--depth", o.depth, "tree depth (default: domain size)");
  app.add_option("--width", o.width, "replication width");
  app.add_option("--budget", o.budget, "step bound for searches");
  app.add_option("--jobs", o.jobs, "worker threads for table builds")->check(CLI::Range(1, 256));
  app.add_option("--format", o.format, "output format")->check(CLI::IsMember({"text", "csv", "sexpr"}));

  auto* parse = app.add_subcommand("parse", "parse and normalize a structure, tree or formula");
  auto* orbits = app.add_subcommand("orbits", "automorphism orbits of tuples");
  orbits->add_option("--length", o.length, "tuple length");
  auto* bf = app.add_subcommand("bf", "back-and-forth relations between two structures");
  auto* rank = app.add_subcommand("rank", "Scott rank");
  rank->add_flag("--witnesses", o.witnesses, "print the definability witnesses");
  auto* embed = app.add_subcommand("embed", "tree of tuples of a structure");
  auto* check = app.add_subcommand("check-tree", "check the six tree properties at alpha");
  check->add_flag("--nu", o.nu, "agreement witnesses range below nu");
  auto* force = app.add_subcommand("force", "forcing at a tree node");
  force->add_option("--node", o.node, "node id");
  force->add_option("--formula", o.formula, "formula s-expression");
  force->add_flag("--weak", o.weak, "weak forcing");
  auto* axioms = app.add_subcommand("emit-axioms", "axioms of trees of tuples as a sentence");
  auto* generic = app.add_subcommand("generic", "generic path and its structure");
  generic->add_option("--node", o.node, "starting node id");
  auto* iso = app.add_subcommand("iso", "isomorphism of structures or trees");
  auto* daisy = app.add_subcommand("daisy", "daisy classification and stage graphs");
  daisy->add_option("--set", o.set, "enumerated set, e.g. cofinite:1,3");
  daisy->add_option("--centers", o.centers, "number of centers");
  daisy->add_option("--stage", o.stage, "stage");
  auto* code = app.add_subcommand("code", "coded structure of a graph");
  code->add_option("--level", o.level, "surrogate level");
  code->add_option("--max-size", o.max_size, "surrogate search bound");
  code->add_option("--check", o.check, "verify the transfer criteria up to this level");
  auto* surrogate = app.add_subcommand("surrogate", "surrogate pair search");
  surrogate->add_option("--level", o.level, "equivalence level");
  surrogate->add_option("--max-size", o.max_size, "largest graph size");
  auto* corpus = app.add_subcommand("corpus", "exhaustive invariant suites");
  corpus->add_option("--size", o.size, "largest graph size")->check(CLI::Range(1, 4));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }
  o.alpha_given = app.count("--alpha") > 0;

  try {
    if (*parse) cmd_parse(o);
    if (*orbits) cmd_orbits(o);
    if (*bf) cmd_bf(o);
    if (*rank) cmd_rank(o);
    if (*embed) cmd_embed(o);
    if (*check) cmd_check_tree(o);
    if (*force) cmd_force(o);
    if (*axioms) cmd_emit_axioms(o);
    if (*generic) cmd_generic(o);
    if (*iso) cmd_iso(o);
    if (*daisy) cmd_daisy(o);
    if (*code) cmd_code(o);
    if (*surrogate) cmd_surrogate(o);
    if (*corpus) return cmd_corpus(o);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
