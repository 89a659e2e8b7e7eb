#include "smforge/presentation.hpp"

#include <algorithm>
#include <sstream>

namespace smf {

const char* rel_tag_name(RelTag t) {
  switch (t) {
    case RelTag::ThetaQ: return "theta-q";
    case RelTag::ThetaA: return "theta-a";
    case RelTag::Hub: return "hub";
    case RelTag::Disk: return "disk";
    case RelTag::ARelator: return "a-relator";
  }
  return "?";
}

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Trivial: return "trivial";
    case Verdict::Unknown: return "unknown";
    case Verdict::Nontrivial: return "nontrivial";
    case Verdict::NecessaryOnly: return "necessary-only";
  }
  return "?";
}

// ------------------------------------------------------------------ XAlphabet

XAlphabet::XAlphabet(const Machine& m)
    : m_(&m), nsym_(static_cast<int>(m.hardware().symbols.size())), N_(m.hardware().nparts()) {}

Letter XAlphabet::theta(int ri, int sector) const {
  int r = ri / 2;
  int i = ((sector % N_) + N_) % N_;
  Letter x = nsym_ + r * N_ + i + 1;
  return m_->rules[ri].positive ? x : -x;
}

GenKind XAlphabet::kind(Letter x) const {
  int a = std::abs(x);
  if (a > nsym_) return GenKind::Theta;
  return m_->hardware().is_state(a) ? GenKind::Q : GenKind::A;
}

int XAlphabet::theta_rule(Letter x) const { return (std::abs(x) - nsym_ - 1) / N_; }
int XAlphabet::theta_sector(Letter x) const { return (std::abs(x) - nsym_ - 1) % N_; }

std::string XAlphabet::name(Letter x) const {
  int a = std::abs(x);
  if (a <= nsym_) return m_->hardware().sym(a).name;
  return "θ:" + m_->rules[2 * theta_rule(a)].id + ":" + std::to_string(theta_sector(a));
}

std::string XAlphabet::letter_str(Letter x) const { return x > 0 ? name(x) : name(x) + "^-1"; }

std::string XAlphabet::word_str(const Word& w) const {
  std::string s;
  for (size_t i = 0; i < w.size(); ++i) {
    if (i) s += ' ';
    s += letter_str(w[i]);
  }
  return s;
}

// --------------------------------------------------------------- Presentation

Word relator_key(const Word& w0) {
  Word w = cyclic_reduce(w0);
  Word best;
  bool have = false;
  for (const Word& v : {w, inverse(w)}) {
    size_t n = v.size();
    for (size_t s = 0; s < std::max<size_t>(n, 1); ++s) {
      Word r(n);
      for (size_t i = 0; i < n; ++i) r[i] = v[(s + i) % n];
      if (!have || r < best) {
        best = std::move(r);
        have = true;
      }
    }
  }
  return best;
}

int Presentation::count(RelTag t) const {
  return static_cast<int>(std::count_if(rels_.begin(), rels_.end(), [&](const Relator& r) { return r.tag == t; }));
}

bool Presentation::add(RelTag tag, const Word& w) {
  Word k = relator_key(w);
  if (!keys_.insert(k).second) return false;
  rels_.push_back(Relator{tag, w});
  return true;
}

bool Presentation::contains(const Word& w) const { return keys_.count(relator_key(w)) > 0; }

std::vector<Letter> Presentation::generators() const {
  std::vector<Letter> g;
  const Hardware& h = x_->machine().hardware();
  for (auto& p : h.parts)
    for (int q : p.letters) g.push_back(q);
  for (int j = 0; j < h.nsectors(); ++j)
    if (!(h.cyclic && j == 0))
      for (int a : h.tape[j]) g.push_back(a);
  for (int x = x_->nsymbols() + 1; x <= x_->size(); ++x) g.push_back(x);
  return g;
}

std::string Presentation::emit() const {
  std::ostringstream o;
  auto gens = generators();
  o << "generators " << gens.size() << "\n";
  for (Letter g : gens) {
    GenKind k = x_->kind(g);
    o << (k == GenKind::Q ? "q " : k == GenKind::A ? "a " : "theta ") << x_->name(g) << "\n";
  }
  o << "relators " << rels_.size() << "\n";
  for (auto& r : rels_) o << "[" << rel_tag_name(r.tag) << "] " << x_->word_str(r.word) << "\n";
  return o.str();
}

std::string Presentation::emit_flat() const {
  std::ostringstream o;
  auto gens = generators();
  std::vector<int> pos(x_->size() + 1, 0);
  o << "gens";
  for (size_t i = 0; i < gens.size(); ++i) {
    pos[gens[i]] = static_cast<int>(i) + 1;
    o << " x" << i + 1;
  }
  o << "\n";
  for (auto& r : rels_) {
    o << "rel ";
    if (r.word.empty()) o << "1";
    for (size_t i = 0; i < r.word.size(); ++i) {
      if (i) o << '*';
      o << 'x' << pos[std::abs(r.word[i])];
      if (r.word[i] < 0) o << "^-1";
    }
    o << "\n";
  }
  return o.str();
}

Presentation presentation_M(const Machine& S) {
  try {
    S.validate();
  } catch (const Error& e) {
    throw Error(ErrorKind::NotNormalized, e.what());
  }
  auto X = std::make_shared<XAlphabet>(S);
  Presentation P(X);
  const Hardware& h = S.hardware();
  int N = h.nparts();
  for (int r = 0; r < S.npositive(); ++r) {
    const Rule& th = S.rules[2 * r];
    for (int i = 0; i < N; ++i) {
      const RulePart& p = th.parts[i];
      // q_i th_{i+1} u^-1 q_i'^-1 v^-1 th_i^-1
      Word w{p.from, X->theta(2 * r, i + 1)};
      if (p.right) w.push_back(-p.right);
      w.push_back(-p.to);
      if (p.left) w.push_back(-p.left);
      w.push_back(-X->theta(2 * r, i));
      P.add(RelTag::ThetaQ, w);
    }
    for (int j = 1; j <= N; ++j) {
      for (int a : h.tape[j])
        if (th.in_domain(j, a)) P.add(RelTag::ThetaA, Word{X->theta(2 * r, j), a, -X->theta(2 * r, j), -a});
    }
  }
  return P;
}

Word hub_word(const Machine& S) { return S.accept_config().flat(); }

Presentation presentation_G(const Machine& S) {
  Presentation P = presentation_M(S);
  P.add(RelTag::Hub, hub_word(S));
  return P;
}

int special_input_sector(const Machine& S) {
  const Hardware& h = S.hardware();
  for (int j = 1; j < h.nsectors(); ++j)
    if (h.sector_names[j] == "P0Q0@1") return j;
  return S.input_sectors.empty() ? -1 : S.input_sectors.front();
}

Word sector_copy(const Hardware& hw, int sector, const Word& u) {
  Word w;
  for (Letter a : u) {
    int found = 0;
    for (int s : hw.tape.at(sector))
      if (hw.sym(s).origin == std::abs(a)) found = s;
    if (!found) throw Error(ErrorKind::Invalid, "sector " + hw.sector_names[sector] + " has no copy of letter");
    push_reduced(w, a > 0 ? found : -found);
  }
  return w;
}

OmegaSource omega_from_list(std::vector<Word> words) {
  auto data = std::make_shared<std::vector<Word>>(std::move(words));
  auto i = std::make_shared<size_t>(0);
  return [data, i]() -> std::optional<Word> {
    if (*i >= data->size()) return std::nullopt;
    return (*data)[(*i)++];
  };
}

OmegaSource omega_powers(int rank, int n, int max_len) {
  // odometer over reduced words of the current length
  struct State {
    int len = 1;
    std::vector<int> digits;  // index into the 2*rank signed letters
  };
  auto st = std::make_shared<State>();
  auto letter = [rank](int d) { return d < rank ? d + 1 : -(d - rank + 1); };
  auto reduced = [letter](const std::vector<int>& ds) {
    for (size_t i = 1; i < ds.size(); ++i)
      if (letter(ds[i]) == -letter(ds[i - 1])) return false;
    return true;
  };
  return [=]() -> std::optional<Word> {
    if (rank <= 0) return std::nullopt;
    while (true) {
      if (max_len >= 0 && st->len > max_len) return std::nullopt;
      if (st->digits.empty()) {
        st->digits.assign(st->len, 0);
      } else {
        int i = st->len - 1;
        while (i >= 0 && ++st->digits[i] == 2 * rank) st->digits[i--] = 0;
        if (i < 0) {
          ++st->len;
          st->digits.clear();
          continue;
        }
      }
      if (!reduced(st->digits)) continue;
      Word u;
      for (int d : st->digits) u.push_back(letter(d));
      return power(u, n);
    }
  };
}

OmegaPresentation::OmegaPresentation(const Machine& S, OmegaSource src)
    : p_(presentation_G(S)), src_(std::move(src)), sector_(special_input_sector(S)) {}

std::optional<Relator> OmegaPresentation::next() {
  if (sector_ < 0 || !src_) return std::nullopt;
  while (auto w = src_()) {
    Word r = sector_copy(p_.alphabet().machine().hardware(), sector_, *w);
    if (r.empty()) continue;
    if (p_.add(RelTag::ARelator, r)) return p_.relators().back();
  }
  return std::nullopt;
}

const Presentation& OmegaPresentation::take(int limit) {
  for (int i = 0; i < limit; ++i)
    if (!next()) break;
  return p_;
}

OmegaPresentation presentation_omega(const Machine& S, OmegaSource src) {
  return OmegaPresentation(S, std::move(src));
}

Relator disk_relator(const Machine& S, const AdmissibleWord& W, const History& witness) {
  bool ok = false;
  try {
    ok = run(S, W, witness).final() == S.accept_config();
  } catch (const Error&) {
    ok = false;
  }
  if (!ok) throw Error(ErrorKind::NotAccepted, word_str(S.hardware(), W));
  return Relator{RelTag::Disk, W.flat()};
}

DiskRelatorStream::DiskRelatorStream(const Machine& S, std::function<std::optional<Item>()> src)
    : S_(&S), src_(std::move(src)) {
  seen_.insert(relator_key(hub_word(S)));
}

std::optional<Relator> DiskRelatorStream::next() {
  while (auto item = src_()) {
    Relator r = disk_relator(*S_, item->first, item->second);
    if (seen_.insert(relator_key(r.word)).second) return r;
  }
  return std::nullopt;
}

DiskRelatorStream disk_relator_stream(const Machine& S, std::vector<DiskRelatorStream::Item> items) {
  auto data = std::make_shared<std::vector<DiskRelatorStream::Item>>(std::move(items));
  auto i = std::make_shared<size_t>(0);
  return DiskRelatorStream(S, [data, i]() -> std::optional<DiskRelatorStream::Item> {
    if (*i >= data->size()) return std::nullopt;
    return (*data)[(*i)++];
  });
}

// -------------------------------------------------------------------- oracles

Certificate FreeTrivial::certify(const Word& w) const {
  if (reduce(w).empty()) return {Verdict::Trivial, "freely trivial"};
  return {Verdict::Unknown, "not freely trivial"};
}

Certificate PowerProduct::certify(const Word& w) const {
  Word prod;
  for (auto& f : factors_) {
    for (Letter x : f.conj) push_reduced(prod, x);
    for (Letter x : power(f.base, n_)) push_reduced(prod, x);
    for (Letter x : inverse(f.conj)) push_reduced(prod, x);
  }
  if (prod == reduce(w))
    return {Verdict::Trivial, std::to_string(factors_.size()) + " conjugates of " + std::to_string(n_) + "-th powers"};
  return {Verdict::Unknown, "supplied decomposition does not match"};
}

Certificate ExponentAbelianized::certify(const Word& w) const {
  std::vector<long> e(rank_ + 1, 0);
  for (Letter x : w) {
    if (std::abs(x) > rank_) return {Verdict::Unknown, "letter outside alphabet"};
    e[std::abs(x)] += x > 0 ? 1 : -1;
  }
  for (int i = 1; i <= rank_; ++i)
    if (((e[i] % n_) + n_) % n_)
      return {Verdict::Nontrivial, "exponent sum of letter " + std::to_string(i) + " is nonzero mod n"};
  return {Verdict::NecessaryOnly, "exponent sums vanish mod n (necessary condition only)"};
}

}  // namespace smf
