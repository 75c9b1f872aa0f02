// configura: command-line front end for rulers, BDC matrices, extensions and spectrum scans.
//
// Exit status: 0 ok, 1 validation failure or bad input, 2 registry conflict, 3 oracle budget exceeded.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "configura/configura.hpp"

using namespace configura;

namespace {

constexpr int kOk = 0, kInvalid = 1, kConflict = 2, kBudget = 3;

std::string slurp(const std::string& path) {
  std::ifstream is(path);
  require(static_cast<bool>(is), ErrorCode::ParseError, "cannot read " + path);
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

std::string extension_of(const std::string& path) {
  const auto dot = path.rfind('.');
  return dot == std::string::npos ? "" : path.substr(dot + 1);
}

void emit(const std::string& text, const std::string& out) {
  if (out.empty() || out == "-") {
    std::cout << text;
    return;
  }
  std::ofstream os(out);
  require(static_cast<bool>(os), ErrorCode::ParseError, "cannot write " + out);
  os << text;
}

// Ruler from "v:k:a1,...,ak" text or a .json / text file.
ModularRuler read_ruler(const std::string& text, const std::string& file) {
  if (!text.empty()) return io::ruler_from_text(text);
  require(!file.empty(), ErrorCode::ParseError, "give --ruler or --ruler-file");
  const auto body = slurp(file);
  if (extension_of(file) == "json") return io::ruler_from_json(json::parse(body));
  return io::ruler_from_text(body.substr(0, body.find_last_not_of(" \t\r\n") + 1));
}

std::string matrix_format(const std::string& fmt, const std::string& path) {
  if (!fmt.empty()) return fmt;
  const auto ext = extension_of(path);
  if (ext == "json" || ext == "alist") return ext;
  return "plain";
}

IncidenceMatrix read_matrix(const std::string& path, const std::string& fmt) {
  const auto body = slurp(path);
  const auto f = matrix_format(fmt, path);
  if (f == "json") return io::matrix_from_json(json::parse(body));
  if (f == "alist") return io::matrix_from_alist(body);
  require(f == "plain", ErrorCode::ParseError, "unknown matrix format " + f);
  return io::matrix_from_plain(body);
}

std::string write_matrix(const IncidenceMatrix& m, const std::string& fmt, const std::string& path) {
  const auto f = matrix_format(fmt, path);
  if (f == "json") return io::matrix_to_json(m).dump() + "\n";
  if (f == "alist") return io::matrix_to_alist(m);
  require(f == "plain", ErrorCode::ParseError, "unknown matrix format " + f);
  return io::matrix_to_plain(m);
}

std::string write_ruler(const ModularRuler& r, const std::string& fmt) {
  if (fmt == "json") return io::ruler_to_json(r).dump() + "\n";
  return io::ruler_to_text(r) + "\n";
}

int report_matrix(const IncidenceMatrix& m, std::uint32_t k) {
  const auto chk = is_configuration(m, k);
  std::cerr << m.nRows << "_" << k << (chk.ok ? " configuration" : " NOT a configuration: " + chk.diagnostic) << '\n';
  return chk.ok ? kOk : kInvalid;
}

std::vector<std::uint32_t> parse_list(const std::string& s) {
  std::vector<std::uint32_t> out;
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, ',');) {
    require(!item.empty() && item.find_first_not_of("0123456789") == std::string::npos, ErrorCode::ParseError,
            "bad list entry '" + item + "'");
    out.push_back(static_cast<std::uint32_t>(std::stoul(item)));
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cyclic and non-cyclic symmetric configurations: constructions, checks and spectrum scans"};
  app.set_config("--config", "", "key = value file with scan settings");
  app.require_subcommand(1);

  ScanOptions opt;
  app.add_option("--threads", opt.threads, "worker threads (CONFIGURA_THREADS overrides)");
  app.add_option("--seed", opt.seed, "seed for sampled multipliers and deletions");
  app.add_option("--max-delta", opt.maxDelta, "marks deleted from larger base rulers");
  app.add_option("--deletion-samples", opt.deletionSamples, "sampled deletion subsets when delta >= 3");
  app.add_option("--unit-cap", opt.unitCap, "try every unit below this modulus");
  app.add_option("--unit-sample", opt.unitSample, "units sampled above the cap");
  app.add_option("--q-max", opt.qMax, "largest field order used by the generators");
  auto* budgetOpt =
      app.add_option("--oracle-budget", opt.oracleBudget, "node budget for the oracle fill in scans (default: on for k <= 10)");
  app.add_flag("--all-rotations", opt.allRotations, "retest every translate, not only the shortest one");

  std::string rulerText, rulerFile, matrixFile, matrixFmt, out, outFmt;
  auto ruler_opts = [&](CLI::App* sub) {
    sub->add_option("--ruler", rulerText, "ruler as v:k:a1,...,ak");
    sub->add_option("--ruler-file", rulerFile, "ruler file (.json or v:k:marks text)");
  };
  auto out_opts = [&](CLI::App* sub) {
    sub->add_option("-o,--out", out, "output file (default stdout)");
    sub->add_option("--out-format", outFmt, "plain|json|alist for matrices, text|json for rulers");
  };

  // construct
  auto* construct = app.add_subcommand("construct", "build a ruler or matrix from a named generator");
  std::string gen, setName = "hermitian-complement";
  std::uint32_t q = 0, p = 0, s = 0, delta = 0, theta = 0, k = 0, c = 2;
  bool onLine = false;
  construct->add_option("generator", gen, "singer|bose|ruzsa|ag|removal|construction-a|ag-extension")
      ->required()
      ->check(CLI::IsMember({"singer", "bose", "ruzsa", "ag", "removal", "construction-a", "ag-extension"}));
  construct->add_option("--q", q, "field order");
  construct->add_option("--p", p, "prime for ruzsa");
  construct->add_option("--s", s, "parallel classes dropped");
  construct->add_option("--delta", delta, "blocks masked (ag) or permutations removed");
  construct->add_option("--theta", theta, "extensions applied");
  construct->add_option("--k", k, "target k for construction-a");
  construct->add_option("--c", c, "subplanes in a baer-union");
  construct->add_option("--set", setName, "conic-internal|conic-external|hermitian-complement|baer-union");
  construct->add_flag("--on-line", onLine, "removal family: removed point lies on the removed line");
  out_opts(construct);

  // validate
  auto* validate = app.add_subcommand("validate", "check a ruler or a matrix");
  ruler_opts(validate);
  validate->add_option("--matrix", matrixFile, "matrix file");
  validate->add_option("--format", matrixFmt, "plain|json|alist (default from extension)");
  validate->add_option("--k", k, "expected k for a matrix");

  // quotient
  auto* quot = app.add_subcommand("quotient", "split a ruler into its t quotient rulers");
  std::uint32_t t = 0;
  ruler_opts(quot);
  quot->add_option("--t", t, "divisor of v")->required();

  // bdc
  auto* bdc = app.add_subcommand("bdc", "block double-circulant form, optionally a selected window");
  std::optional<std::uint32_t> selJ, altJ;
  std::uint32_t f = 1;
  ruler_opts(bdc);
  bdc->add_option("--t", t, "divisor of v")->required();
  bdc->add_option("--select", selJ, "keep c block columns starting at weight class j");
  bdc->add_option("--alternate", altJ, "alternating selection starting at class j");
  bdc->add_option("--c", c, "window size for --select");
  bdc->add_option("--f", f, "half window size for --alternate");
  out_opts(bdc);

  // trim
  auto* trim = app.add_subcommand("trim", "remove the lowest residues from every block of a class");
  std::string deltas;
  ruler_opts(trim);
  trim->add_option("--t", t, "divisor of v")->required();
  trim->add_option("--deltas", deltas, "one count per weight class, comma separated")->required();
  out_opts(trim);

  // extend
  auto* extend = app.add_subcommand("extend", "add theta points and lines by extension");
  std::string ag;
  extend->add_option("--matrix", matrixFile, "input matrix file");
  extend->add_option("--format", matrixFmt, "plain|json|alist (default from extension)");
  extend->add_option("--ag", ag, "start from the affine block matrix q,s,Delta");
  extend->add_option("--k", k, "k of the input matrix");
  extend->add_option("--theta", theta, "number of extensions")->required();
  out_opts(extend);

  // oracle
  auto* oracle = app.add_subcommand("oracle", "exhaustive search for a cyclic v_k");
  std::uint32_t ov = 0, ok = 0;
  std::uint64_t budget = 2'000'000'000;
  oracle->add_option("v", ov)->required();
  oracle->add_option("k", ok)->required();
  oracle->add_option("--budget", budget, "node budget");

  // scan
  auto* scan = app.add_subcommand("scan", "collect witnesses for one k over [P(k), G(k))");
  std::uint32_t sk = 0;
  bool cyclicOnly = false, all = false;
  std::string db;
  scan->add_option("k", sk)->required();
  auto* cyc = scan->add_flag("--cyclic", cyclicOnly, "cyclic scan only");
  scan->add_flag("--all", all, "cyclic and non-cyclic scans (default)")->excludes(cyc);
  scan->add_option("--vmax", opt.vMax, "largest v scanned");
  scan->add_option("--db", db, "write witnesses as JSON lines");

  // tables
  auto* tables = app.add_subcommand("tables", "scan a range of k and print spectrum tables");
  std::uint32_t kmin = 3, kmax = 9;
  std::string tableFmt = "md";
  bool compare = false;
  tables->add_option("--kmin", kmin);
  tables->add_option("--kmax", kmax);
  tables->add_option("--format", tableFmt, "csv|json|md")->check(CLI::IsMember({"csv", "json", "md", "markdown"}));
  tables->add_flag("--compare", compare, "append the diff against the reference data");
  tables->add_option("--db", db, "write witnesses as JSON lines");
  out_opts(tables);

  // verify-db
  auto* verify = app.add_subcommand("verify-db", "replay every witness in a database");
  std::string dbIn;
  verify->add_option("file", dbIn)->required()->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInvalid;
  }

  try {
    if (*construct) {
      if (gen == "singer" || gen == "bose" || gen == "ruzsa") {
        const auto r = gen == "singer" ? singer_ruler(q) : gen == "bose" ? bose_ruler(q) : ruzsa_ruler(p);
        emit(write_ruler(r, outFmt), out);
        return kOk;
      }
      IncidenceMatrix m;
      std::uint32_t mk = 0;
      if (gen == "ag") {
        m = ag_block_matrix(q, s, delta);
        mk = q - s - delta;
      } else if (gen == "ag-extension") {
        m = extension_family_ag(q, s, delta, theta);
        mk = q - s - delta;
      } else if (gen == "removal") {
        m = removal_family(q, s, onLine);
        mk = static_cast<std::uint32_t>(m.rows.at(0).count());
      } else {
        const auto res = construction_a(detail::named_point_set(pg_incidence(q), setName, c), k);
        if (!res.symmetric)
          std::cerr << "not symmetric: " << res.v << " points, " << res.b << " lines, " << res.rk
                    << " lines per point\n";
        m = res.matrix;
        mk = k;
        if (!res.symmetric) {
          emit(write_matrix(m, outFmt, out), out);
          return kInvalid;
        }
      }
      emit(write_matrix(m, outFmt, out), out);
      return report_matrix(m, mk);
    }

    if (*validate) {
      if (!matrixFile.empty()) {
        const auto m = read_matrix(matrixFile, matrixFmt);
        if (k == 0 && m.nRows) k = static_cast<std::uint32_t>(m.rows[0].count());
        return report_matrix(m, k);
      }
      const auto r = read_ruler(rulerText, rulerFile);
      const auto res = validate_modular(r.marks, r.v);
      std::cout << "(" << r.v << "," << r.k() << ") " << (res.valid ? "valid" : "INVALID");
      if (res.valid) {
        const auto d = deficiency(r);
        std::cout << ", deficiency " << d.d;
        if (!d.uncovered.empty() && d.uncovered.size() <= 32) {
          std::cout << " (uncovered";
          for (auto x : d.uncovered) std::cout << ' ' << x;
          std::cout << ')';
        }
      } else {
        std::cout << ", repeated differences";
        for (auto x : res.profile.collisions) std::cout << ' ' << x;
      }
      std::cout << '\n';
      return res.valid ? kOk : kInvalid;
    }

    if (*quot) {
      const auto r = read_ruler(rulerText, rulerFile);
      const auto parts = quotient(r, t);
      for (std::uint32_t h = 0; h < parts.size(); ++h) {
        std::cout << "B_" << h << " w=" << parts[h].weight << " mod " << parts[h].ruler.v << ":";
        for (auto x : parts[h].ruler.marks) std::cout << ' ' << x;
        std::cout << '\n';
      }
      return kOk;
    }

    if (*bdc) {
      const auto r = read_ruler(rulerText, rulerFile);
      auto b = bdc_assemble(r, t);
      std::cout << "weights";
      for (auto w : weight_vector(b)) std::cout << ' ' << w;
      std::cout << '\n';
      if (selJ) b = select_blocks(b, *selJ, c);
      if (altJ) b = select_blocks_alternating(b, *altJ, f);
      std::cout << "v=" << b.v() << " k=" << b.row_weight() << '\n';
      const auto m = expand(b);
      if (!out.empty()) emit(write_matrix(m, outFmt, out), out);
      return report_matrix(m, b.row_weight());
    }

    if (*trim) {
      const auto r = read_ruler(rulerText, rulerFile);
      const auto b = trim_uniform(bdc_assemble(r, t), parse_list(deltas));
      const auto m = expand(b);
      std::cout << "v=" << b.v() << " k=" << b.row_weight() << '\n';
      if (!out.empty()) emit(write_matrix(m, outFmt, out), out);
      return report_matrix(m, b.row_weight());
    }

    if (*extend) {
      IncidenceMatrix m;
      if (!ag.empty()) {
        const auto a = parse_list(ag);
        require(a.size() == 3, ErrorCode::ParseError, "--ag wants q,s,Delta");
        m = ag_block_matrix(a[0], a[1], a[2]);
        if (k == 0) k = a[0] - a[1] - a[2];
      } else {
        require(!matrixFile.empty(), ErrorCode::ParseError, "give --matrix or --ag");
        m = read_matrix(matrixFile, matrixFmt);
        if (k == 0 && m.nRows) k = static_cast<std::uint32_t>(m.rows[0].count());
      }
      const auto run = extend_run(m, k, theta);
      std::cerr << "applied " << run.applied.size() << " extensions (" << run.recycled << " from new points)\n";
      emit(write_matrix(run.matrix, outFmt, out), out);
      return report_matrix(run.matrix, k);
    }

    if (*oracle) {
      const auto shards = oracle_shards(ov, ok);
      const auto res = oracle_merge(parallel_map(shards.size(), worker_count(opt.threads),
                                                 [&](std::size_t i) { return oracle_run_shard(shards[i], budget); }));
      std::cout << "(" << ov << "," << ok << ") " << to_string(res.outcome) << " after " << res.nodes << " nodes";
      if (res.witness) std::cout << ": " << io::ruler_to_text(*res.witness);
      std::cout << '\n';
      return res.outcome == OracleOutcome::BudgetExceeded ? kBudget : kOk;
    }

    const KnownFacts facts;
    // Exhaustive gap filling is cheap up to k = 10 and makes those rows exact.
    auto options_for = [&](std::uint32_t kk) {
      ScanOptions o = opt;
      if (!budgetOpt->count() && kk <= 10) o.oracleBudget = 2'000'000'000;
      return o;
    };
    if (*scan) {
      opt = options_for(sk);
      auto rec = make_record(sk);
      cyclic_scan(rec, opt, facts);
      if (!cyclicOnly) noncyclic_scan(rec, opt, facts);
      std::cout << "k=" << sk << " P=" << rec.P << " G=" << rec.G << '\n';
      std::cout << "cyclic: " << format_intervals(keys(rec.cyclic)) << '\n';
      if (!cyclicOnly) std::cout << "any:    " << format_intervals(keys(rec.any)) << '\n';
      if (opt.vMax == 0 || opt.vMax + 1 >= rec.G) {
        std::cout << "E_c <= " << ec_upper_bound(rec);
        if (!cyclicOnly) std::cout << ", E <= " << e_upper_bound(rec);
        std::cout << '\n';
      }
      if (!db.empty()) save_db(db, {rec});
      return kOk;
    }

    if (*tables) {
      std::vector<SpectrumRecord> records;
      for (std::uint32_t kk = kmin; kk <= kmax; ++kk) {
        auto rec = make_record(kk);
        cyclic_scan(rec, options_for(kk), facts);
        noncyclic_scan(rec, options_for(kk), facts);
        records.push_back(std::move(rec));
      }
      std::string text = emit_tables(records, parse_table_format(tableFmt));
      if (compare) text += "\n" + format_report(compare_reference(records, facts));
      emit(text, out);
      if (!db.empty()) save_db(db, records);
      return compare_reference(records, facts).count(DiffKind::RegistryConflict) ? kConflict : kOk;
    }

    if (*verify) {
      const auto all = load_db(dbIn);
      std::size_t bad = 0, conflicts = 0;
      for (const auto& w : all) {
        if (facts.forbids(w.v, w.k, w.cyclic)) {
          ++conflicts;
          std::cout << w.v << "_" << w.k << ": registry conflict\n";
          continue;
        }
        const auto res = verify_witness(w);
        if (!res.ok) {
          ++bad;
          std::cout << w.v << "_" << w.k << ": " << res.message << '\n';
        }
      }
      std::cout << all.size() - bad - conflicts << " of " << all.size() << " witnesses verified\n";
      return conflicts ? kConflict : bad ? kInvalid : kOk;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.code() == ErrorCode::RegistryConflict ? kConflict : kInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInvalid;
  }
  return kOk;
}
