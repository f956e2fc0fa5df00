#include "canon.hpp"

#include <filesystem>
#include <functional>
#include <set>

#include "ptt/print.hpp"

namespace ptt::testing {

namespace {

const char* lit(bool b) { return b ? "true" : "false"; }

class BoolGen {
 public:
  BoolGen(uint64_t seed, int max_depth) : rng_(seed), max_depth_(max_depth) {}

  BoolCase make(int depth) {
    if (depth >= max_depth_) {
      bool b = coin();
      return {lit(b), b};
    }
    int d = depth + 1;
    switch (pick(18)) {
      case 0: {
        bool b = coin();
        return {lit(b), b};
      }
      case 1: {
        auto c = make(d), t = make(d), e = make(d);
        return {"(if " + c.src + " " + t.src + " " + e.src + ")", c.value ? t.value : e.value};
      }
      case 2: {
        auto c = make(d), t = make(d), e = make(d);
        return {"(if [b] bool " + c.src + " " + t.src + " " + e.src + ")", c.value ? t.value : e.value};
      }
      case 3: {
        auto m = make(d);
        return {"(hcom bool 0 1 " + m.src + ")", m.value};
      }
      case 4: {
        // The tube sits on an empty face.
        auto m = make(d), n = make(d);
        return {"(hcom bool 0 1 " + m.src + " (tube (= 0 1) [k " + n.src + "]))", m.value};
      }
      case 5: {
        // A tube on the true face that agrees with the cap: the composite is
        // the tube at the target, which is the cap again.
        auto m = make(d);
        return {"(hcom bool 1 0 " + m.src + " (tube (= 1 1) [k " + m.src + "]))", m.value};
      }
      case 6: {
        auto m = make(d);
        return {"(coe [k] bool 0 1 " + m.src + ")", m.value};
      }
      case 7: {
        auto m = make(d);
        return {"(coe [k] (Gel 0 bool unit [a b unit]) 1 0 " + m.src + ")", m.value};
      }
      case 8: {
        auto m = make(d);
        return {"(papp (plam [k] " + m.src + ") " + (coin() ? "0" : "1") + ")", m.value};
      }
      case 9: {
        auto m = make(d), n = make(d);
        if (coin()) return {"(fst (pair " + m.src + " " + n.src + "))", m.value};
        return {"(snd (pair " + n.src + " " + m.src + "))", m.value};
      }
      case 10: {
        // extent at a constant with a function applied pointwise.
        auto m = make(d), t = make(d), e = make(d);
        std::string f = "(if a " + t.src + " " + e.src + ")";
        std::string f1 = "(if a1 " + t.src + " " + e.src + ")";
        std::string fq = "(if (bapp c z) " + t.src + " " + e.src + ")";
        bool one = coin();
        return {std::string("(extent ") + (one ? "1 " : "0 ") + m.src + " [a " + f + "] [a1 " + f1 + "] [a a1 c (blam [z] " +
                    fq + ")])",
                m.value ? t.value : e.value};
      }
      case 11: {
        auto a = make(d), b = make(d), m = make(d);
        std::string r = "(lam [t] bool)";
        return {"(unlink bool bool " + r + " " + a.src + " " + b.src + " (link bool bool " + r + " " + a.src + " " + b.src +
                    " " + m.src + "))",
                m.value};
      }
      case 12: {
        // ungel of an extent at the bound variable: the extent step has to
        // fire before ungel can see a gel.
        auto m0 = make(d), t = make(d), e = make(d), w = make(d);
        std::string f = "(if a " + t.src + " " + e.src + ")";
        std::string f1 = "(if a1 " + t.src + " " + e.src + ")";
        std::string end = "(if " + m0.src + " " + t.src + " " + e.src + ")";
        std::string gel = "(Gel x bool bool [u v bool])";
        return {"(unlink bool bool (lam [t] bool) " + end + " " + end + " (blam [x] (extent x (bapp (the (bridge [z] bool " +
                    m0.src + " " + m0.src + ") (blam [z] " + m0.src + ")) x) [a " + f + "] [a1 " + f1 +
                    "] [a a1 c (blam [z] (gel z " + f + " " + f1 + " " + w.src + "))] [x bool] [x d " + gel + "])))",
                w.value};
      }
      case 13: {
        auto a = make(d), b = make(d), m = make(d);
        return {"(ungel [x] (the (Gel x bool bool [u v bool]) (gel x " + a.src + " " + b.src + " " + m.src + ")))",
                m.value};
      }
      case 14: {
        auto m = make(d);
        return {"(papp (poly-id-pt coe-id bool " + m.src + ") " + (coin() ? "0" : "1") + ")", m.value};
      }
      case 15: {
        auto m = make(d);
        return {"((papp (poly-id coe-id) " + std::string(coin() ? "0" : "1") + ") bool " + m.src + ")", m.value};
      }
      case 16: {
        auto m = make(d);
        return {"(bapp (bfunapp bool (lam [_] bool) (lam [b] b) (lam [b] b) (blam [x] (lam [b] b)) " + m.src + " " +
                    m.src + " (blam [_] " + m.src + ")) " + (coin() ? "0" : "1") + ")",
                m.value};
      }
      default: {
        auto m = make(d);
        return {"(coe-id bool " + m.src + ")", m.value};
      }
    }
  }

 private:
  size_t pick(size_t n) { return std::uniform_int_distribution<size_t>(0, n - 1)(rng_); }
  bool coin() { return std::bernoulli_distribution(0.5)(rng_); }
  std::mt19937_64 rng_;
  int max_depth_;
};

}  // namespace

std::vector<BoolCase> bool_cases(uint64_t seed, size_t n, int max_depth) {
  BoolGen gen(seed, max_depth);
  std::vector<BoolCase> out;
  std::set<std::string> seen;
  for (size_t tries = 0; out.size() < n && tries < 100 * n; ++tries) {
    BoolCase c = gen.make(0);
    if (c.src == "true" || c.src == "false") continue;
    if (seen.insert(c.src).second) out.push_back(std::move(c));
  }
  return out;
}

Globals canonicity_globals(const std::string& corpus_dir) {
  std::string src;
  for (const char* f : {"prelude.ptt", "poly_id.ptt", "gel_link.ptt", "function_bridge.ptt"})
    src += "(import \"" + (std::filesystem::absolute(corpus_dir) / f).string() + "\")\n";
  Globals g;
  FileReport rep = check_source(src, "<canonicity>", kDefaultFuel, &g);
  if (!rep.ok()) throw std::runtime_error("corpus material does not check:\n" + render_text(rep));
  return g;
}

CanonicityReport run_canonicity(const Globals& g, const std::vector<BoolCase>& cases, size_t fuel) {
  CanonicityReport rep;
  auto note = [&](const std::string& s) {
    if (rep.examples.size() < 5) rep.examples.push_back(s);
  };
  for (auto& c : cases) {
    ++rep.cases;
    TermP m;
    try {
      m = parse_term(c.src);
      ConvCx cx;
      cx.globals = &g;
      cx.fuel = fuel;
      check_elem(cx, m, mk::boolean());
    } catch (const CheckError& e) {
      ++rep.rejected;
      note("rejected (" + e.rule + "): " + c.src + ": " + e.message);
      continue;
    } catch (const std::exception& e) {
      ++rep.rejected;
      note(std::string("rejected: ") + c.src + ": " + e.what());
      continue;
    }
    ++rep.accepted;
    StepOptions o;
    o.globals = &g;
    EvalResult r = eval(m, fuel, o);
    if (r.status == EvalResult::Status::Stuck) {
      ++rep.stuck;
      note("stuck: " + c.src + ": " + r.reason);
    } else if (r.status == EvalResult::Status::Diverged) {
      ++rep.diverged;
      note("diverged: " + c.src);
    } else if (r.term->tag == Tag::True || r.term->tag == Tag::False) {
      ++rep.canonical;
      if ((r.term->tag == Tag::True) != c.value) {
        ++rep.wrong_value;
        note("wrong value " + show(r.term) + ": " + c.src);
      }
    } else {
      ++rep.stuck;
      note("non-canonical value " + show(r.term) + ": " + c.src);
    }
  }
  return rep;
}

}  // namespace ptt::testing
