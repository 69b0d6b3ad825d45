#include "cli.hpp"

#include <chrono>
#include <fstream>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "slnw/certificate.hpp"
#include "slnw/constants.hpp"
#include "slnw/cover.hpp"
#include "slnw/factorize.hpp"
#include "slnw/table.hpp"
#include "slnw/unipotent.hpp"
#include "slnw/word.hpp"

namespace slnw::cli {

namespace {

IntMatrix random_mennicke_element(int n, long q, int len, uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> idx(1, n);
  std::uniform_int_distribution<long> coef(-3, 3);
  IntMatrix acc = IntMatrix::identity(n);
  for (int s = 0; s < len; ++s) {
    int i = idx(rng), j = idx(rng);
    long c = coef(rng);
    if (i == j || c == 0) continue;
    acc = acc * IntMatrix::elementary(n, i, j, mpz_class(q * c));
  }
  return acc;
}

void write_output(const std::string& path, const std::string& text,
                  std::ostream& out) {
  if (path.empty()) {
    out << text;
  } else {
    std::ofstream f(path);
    f << text;
  }
}

int cmd_factor(const std::string& matrix_text, const std::string& matrix_file,
               int random_len, int n, long q, uint64_t seed, int max_len,
               const std::string& out_path, std::ostream& out,
               std::ostream& err) {
  IntMatrix g = IntMatrix::identity(1);
  try {
    if (!matrix_text.empty()) {
      g = IntMatrix::from_text(matrix_text);
    } else if (!matrix_file.empty()) {
      std::ifstream f(matrix_file);
      if (!f) throw std::invalid_argument("cannot open " + matrix_file);
      std::stringstream ss;
      ss << f.rdbuf();
      std::string text = ss.str();
      while (!text.empty() && (text.back() == '\n' || text.back() == '\r'))
        text.pop_back();
      g = IntMatrix::from_text(text);
    } else if (random_len > 0) {
      g = random_mennicke_element(n, q, random_len, seed);
    } else {
      err << "factor: provide --matrix, --matrix-file or --random\n";
      return 1;
    }
  } catch (const std::invalid_argument& e) {
    err << "factor: " << e.what() << "\n";
    return 1;
  }

  if (g.dim() < 3) {
    err << "factor: need n >= 3\n";
    return 1;
  }
  if (g.det() != 1 || !in_congruence(g, q)) {
    err << "factor: input is not in the level-" << q << " congruence subgroup\n";
    return 1;
  }
  mpz_class q2 = mpz_class(q) * q;
  for (int i = 1; i <= g.dim(); ++i) {
    mpz_class r = g.entry(i, i) - 1;
    if (!mpz_divisible_p(r.get_mpz_t(), q2.get_mpz_t())) {
      err << "factor: diagonal entry (" << i << "," << i << ") = "
          << g.entry(i, i).get_str() << " is not 1 mod q^2\n";
      return 1;
    }
  }

  LU3UResult r = factor_LU3U(g, q, max_len);
  if (r.status == FactorStatus::SoftFail) {
    err << "factor: soft failure: " << r.detail << "\n";
    return 2;
  }
  VerifyReport rep = r.certificate.verify();
  if (!rep.ok) {
    err << "factor: internal verification failed: " << rep.detail << "\n";
    return 1;
  }
  write_output(out_path, r.certificate.serialize(), out);
  if (!out_path.empty())
    out << "classes=" << r.certificate.class_sequence() << " status=PASS\n";
  return 0;
}

int cmd_width_or_values(bool width_mode, const std::string& word_text, int n,
                        uint64_t m, uint64_t budget, uint64_t seed,
                        const std::string& format, std::ostream& out,
                        std::ostream& err) {
  Word w;
  try {
    w = Word::parse(word_text);
  } catch (const WordParseError& e) {
    err << "bad word: " << e.what() << "\n";
    return 1;
  }
  auto t0 = std::chrono::steady_clock::now();
  FiniteGroupTable T = FiniteGroupTable::enumerate(n, m, budget);
  WidthResult res = width_of_word(w, T, budget, seed);
  auto t1 = std::chrono::steady_clock::now();
  double ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
  if (format == "structured") {
    out << "word=" << w.to_text() << " n=" << n << " m=" << m
        << " values=" << res.value_count;
    if (width_mode)
      out << " width=" << res.width << " exact=" << (res.exact ? 1 : 0);
    out << " elapsed-ms=" << static_cast<long>(ms) << "\n";
  } else {
    out << "word " << w.to_text() << " over SL_" << n << "(Z/" << m << ")"
        << ": " << res.value_count << " values";
    if (width_mode)
      out << ", width " << res.width << (res.exact ? "" : " (approximate)");
    out << " [" << static_cast<long>(ms) << " ms]\n";
  }
  return 0;
}

int cmd_witness(const std::string& word_text, std::ostream& out,
                std::ostream& err) {
  Word w;
  try {
    w = Word::parse(word_text);
  } catch (const WordParseError& e) {
    err << "bad word: " << e.what() << "\n";
    return 1;
  }
  if (is_trivial_on_free(w)) {
    err << "witness: word is trivial\n";
    return 1;
  }
  QWitness qw = q_witness(w);
  IntMatrix target = IntMatrix::elementary(3, 1, 3, mpz_class(qw.q));
  bool replay =
      qw.conjugator * qw.commutator * qw.conjugator.inverse() == target;
  out << "word=" << w.to_text() << "\n";
  out << "q=" << qw.q << "\n";
  out << "d=" << qw.q * qw.q << "\n";
  out << "g=" << qw.g.to_text() << "\n";
  out << "h=" << qw.h.to_text() << "\n";
  out << "commutator=" << qw.commutator.to_text() << "\n";
  out << "conjugator=" << qw.conjugator.to_text() << "\n";
  out << "replay=" << (replay ? "PASS" : "FAIL") << "\n";
  return replay ? 0 : 1;
}

int cmd_verify(const std::vector<std::string>& paths, std::ostream& out,
               std::ostream& err) {
  bool all_ok = true;
  for (const auto& path : paths) {
    std::ifstream f(path);
    if (!f) {
      err << path << ": cannot open\n";
      all_ok = false;
      continue;
    }
    std::stringstream ss;
    ss << f.rdbuf();
    std::string text = ss.str();
    try {
      if (text.rfind("slnw-factor-certificate", 0) == 0) {
        FactorCertificate cert = FactorCertificate::deserialize(text);
        VerifyReport rep = cert.verify();
        if (rep.ok) {
          out << path << ": PASS\n";
        } else {
          out << path << ": FAIL";
          if (rep.failed_factor > 0) out << " factor " << rep.failed_factor;
          out << " (" << rep.detail << ")\n";
          all_ok = false;
        }
      } else if (text.rfind("slnw-lift-certificate", 0) == 0) {
        LiftCertificate cert = LiftCertificate::deserialize(text);
        LiftVerifyReport rep = verify_lift_certificate(cert);
        if (rep.ok && cert.status == "PASS") {
          out << path << ": PASS (" << cert.samples.size() << " samples)\n";
        } else {
          out << path << ": FAIL";
          if (rep.failed_sample > 0) out << " sample " << rep.failed_sample;
          out << " (" << (rep.ok ? "status " + cert.status : rep.detail)
              << ")\n";
          all_ok = false;
        }
      } else {
        err << path << ": unrecognized certificate format\n";
        all_ok = false;
      }
    } catch (const std::exception& e) {
      err << path << ": parse error: " << e.what() << "\n";
      all_ok = false;
    }
  }
  return all_ok ? 0 : 1;
}

int cmd_constants(std::ostream& out) {
  for (const auto& row : constant_chain())
    out << row.name << ": " << row.value << "  [" << row.derivation << "]\n";
  return 0;
}

int cmd_cover(const std::string& word_text, int n, uint64_t p, int K,
              int samples, uint64_t seed, uint64_t budget,
              const std::string& out_path, bool verbose, std::ostream& out,
              std::ostream& err) {
  Word w;
  try {
    w = Word::parse(word_text);
  } catch (const WordParseError& e) {
    err << "bad word: " << e.what() << "\n";
    return 1;
  }
  LiftCertificate cert = word_coset_cover(w, n, p, K, samples, seed, budget);
  write_output(out_path, cert.serialize(), out);
  if (!out_path.empty() || verbose) {
    out << "status=" << cert.status << " samples=" << cert.samples.size();
    if (!cert.note.empty()) out << " note=" << cert.note;
    out << "\n";
    if (verbose) {
      for (size_t i = 0; i < cert.samples.size(); ++i) {
        const auto& s = cert.samples[i];
        out << "sample " << (i + 1) << ": factors=" << s.factors.size()
            << " residual-valuation=" << s.residual_valuation << "\n";
      }
    }
  }
  if (cert.status == "PASS") return 0;
  if (cert.status == "INCONCLUSIVE") return 2;
  return 1;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"exact word-map and bounded-factorization computations in SL_n(Z)"};
  app.require_subcommand(1);

  // factor
  auto* factor = app.add_subcommand(
      "factor", "factor a congruence element into L,Uc,Uc,Uc,U");
  std::string matrix_text, matrix_file, out_path, format = "text";
  int random_len = 0, n = 6, K = 3, samples = 200, max_len = 96;
  long q = 1;
  uint64_t seed = 1, p = 2, budget = 10000000, m = 2;
  factor->add_option("--matrix", matrix_text, "matrix text, rows ';' entries ','");
  factor->add_option("--matrix-file", matrix_file, "file with matrix text");
  factor->add_option("--random", random_len, "random word length to generate");
  factor->add_option("--n", n, "dimension for --random");
  factor->add_option("--q", q, "congruence level")->required();
  factor->add_option("--seed", seed, "random seed");
  factor->add_option("--max-len", max_len, "alternating search budget");
  factor->add_option("--out", out_path, "certificate output path");

  // width / values
  auto* width = app.add_subcommand("width", "word width over SL_n(Z/m)");
  auto* values = app.add_subcommand("values", "word value set over SL_n(Z/m)");
  std::string word_text;
  for (auto* cmd : {width, values}) {
    cmd->add_option("--word", word_text, "word, e.g. [x1,x2]")->required();
    cmd->add_option("--n", n, "dimension")->required();
    cmd->add_option("--m", m, "modulus")->required();
    cmd->add_option("--budget-elements", budget, "enumeration budget");
    cmd->add_option("--seed", seed, "random seed");
    cmd->add_option("--format", format, "text or structured");
  }

  // witness
  auto* witness = app.add_subcommand("witness", "level witness for a word");
  witness->add_option("--word", word_text, "nontrivial word")->required();

  // verify
  auto* verify = app.add_subcommand("verify", "replay certificate files");
  std::vector<std::string> paths;
  verify->add_option("files", paths, "certificate files")->required();

  // constants
  app.add_subcommand("constants", "factor-count bookkeeping table");

  // cover / lift
  auto* cover = app.add_subcommand(
      "cover", "sampled covering certificate at precision K");
  auto* lift = app.add_subcommand("lift", "single-target lift, verbose");
  for (auto* cmd : {cover, lift}) {
    cmd->add_option("--word", word_text, "word")->required();
    cmd->add_option("--n", n, "dimension")->required();
    cmd->add_option("--p", p, "prime")->required();
    cmd->add_option("--K", K, "precision")->required();
    cmd->add_option("--seed", seed, "random seed");
    cmd->add_option("--budget-elements", budget, "enumeration budget");
    cmd->add_option("--out", out_path, "certificate output path");
  }
  cover->add_option("--budget-samples", samples, "sample count");

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return 0;
    }
    err << e.what() << "\n";
    return 1;
  }

  try {
    if (factor->parsed())
      return cmd_factor(matrix_text, matrix_file, random_len, n, q, seed,
                        max_len, out_path, out, err);
    if (width->parsed())
      return cmd_width_or_values(true, word_text, n, m, budget, seed, format,
                                 out, err);
    if (values->parsed())
      return cmd_width_or_values(false, word_text, n, m, budget, seed, format,
                                 out, err);
    if (witness->parsed()) return cmd_witness(word_text, out, err);
    if (verify->parsed()) return cmd_verify(paths, out, err);
    if (app.get_subcommand("constants")->parsed()) return cmd_constants(out);
    if (cover->parsed())
      return cmd_cover(word_text, n, p, K, samples, seed, budget, out_path,
                       false, out, err);
    if (lift->parsed())
      return cmd_cover(word_text, n, p, K, 1, seed, budget, out_path, true,
                       out, err);
  } catch (const std::domain_error& e) {
    err << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    err << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return 1;
  }
  err << "no subcommand\n";
  return 1;
}

}  // namespace slnw::cli
