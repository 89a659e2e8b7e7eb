#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "smforge/machine.hpp"

namespace smf {

enum class GenKind { Q, A, Theta };
enum class RelTag { ThetaQ, ThetaA, Hub, Disk, ARelator };
const char* rel_tag_name(RelTag t);

// The generating set X = Q u Y u R of a machine.  Machine symbols keep their
// ids; theta_i of the positive rule with pair index r gets
// nsymbols + r*N + i + 1, where N is the number of parts and i is taken mod N.
class XAlphabet {
 public:
  explicit XAlphabet(const Machine& m);
  const Machine& machine() const { return *m_; }
  int nsymbols() const { return nsym_; }
  int nparts() const { return N_; }
  int size() const { return nsym_ + N_ * m_->npositive(); }
  // Signed theta letter for rule index ri (either sign) at sector j.
  Letter theta(int ri, int sector) const;
  GenKind kind(Letter x) const;
  int theta_rule(Letter x) const;    // pair index of a theta letter
  int theta_sector(Letter x) const;  // 0..N-1
  std::string name(Letter x) const;  // unsigned generator name
  std::string letter_str(Letter x) const;
  std::string word_str(const Word& w) const;

 private:
  const Machine* m_;
  int nsym_;
  int N_;
};

struct Relator {
  RelTag tag;
  Word word;
};

// Canonical representative under cyclic permutation and inversion.
Word relator_key(const Word& w);

class Presentation {
 public:
  explicit Presentation(std::shared_ptr<const XAlphabet> x) : x_(std::move(x)) {}
  const XAlphabet& alphabet() const { return *x_; }
  std::shared_ptr<const XAlphabet> alphabet_ptr() const { return x_; }
  const std::vector<Relator>& relators() const { return rels_; }
  int count(RelTag t) const;
  // Adds the relator unless an equivalent one is present; returns whether added.
  bool add(RelTag tag, const Word& w);
  bool contains(const Word& w) const;
  // Generators are listed q-letters, a-letters, theta-letters.
  std::vector<Letter> generators() const;

  std::string emit() const;
  std::string emit_flat() const;

 private:
  std::shared_ptr<const XAlphabet> x_;
  std::vector<Relator> rels_;
  std::set<Word> keys_;
};

Presentation presentation_M(const Machine& S);
Presentation presentation_G(const Machine& S);
Word hub_word(const Machine& S);

// Sector that carries a-relators: P0Q0@1 when present, else the first input
// sector, -1 if neither exists.
int special_input_sector(const Machine& S);
// Copy of a word over A in the given sector.
Word sector_copy(const Hardware& hw, int sector, const Word& u);

using OmegaSource = std::function<std::optional<Word>()>;
OmegaSource omega_from_list(std::vector<Word> words);
// u^n for all nonempty reduced u over an alphabet of the given rank, in
// length-lexicographic order of u, up to max_len (unbounded when negative).
OmegaSource omega_powers(int rank, int n, int max_len = -1);

// G(S) followed by a lazily produced stream of a-relators.
class OmegaPresentation {
 public:
  OmegaPresentation(const Machine& S, OmegaSource src);
  const Presentation& current() const { return p_; }
  std::optional<Relator> next();
  // Pull at most limit relators from the source.
  const Presentation& take(int limit);

 private:
  Presentation p_;
  OmegaSource src_;
  int sector_;
};
OmegaPresentation presentation_omega(const Machine& S, OmegaSource src);

// Disk relator for an accepted configuration; the witness is re-run and must
// end at the accept configuration (NotAccepted otherwise).
Relator disk_relator(const Machine& S, const AdmissibleWord& W, const History& witness);

class DiskRelatorStream {
 public:
  using Item = std::pair<AdmissibleWord, History>;
  DiskRelatorStream(const Machine& S, std::function<std::optional<Item>()> src);
  // Next relator that is new, i.e. not the hub and not seen before.
  std::optional<Relator> next();

 private:
  const Machine* S_;
  std::function<std::optional<Item>()> src_;
  std::set<Word> seen_;
};
DiskRelatorStream disk_relator_stream(const Machine& S, std::vector<DiskRelatorStream::Item> items);

// a-relator oracles.
enum class Verdict { Trivial, Unknown, Nontrivial, NecessaryOnly };
const char* verdict_name(Verdict v);

struct Certificate {
  Verdict verdict = Verdict::Unknown;
  std::string note;
};

class ARelatorOracle {
 public:
  virtual ~ARelatorOracle() = default;
  virtual std::string name() const = 0;
  // Sound oracles only answer Trivial for words that are trivial in B(A,n).
  virtual bool sound() const = 0;
  virtual Certificate certify(const Word& w) const = 0;
};

class FreeTrivial : public ARelatorOracle {
 public:
  std::string name() const override { return "FreeTrivial"; }
  bool sound() const override { return true; }
  Certificate certify(const Word& w) const override;
};

// The caller supplies the claimed decomposition w = prod c_i u_i^n c_i^{-1}.
class PowerProduct : public ARelatorOracle {
 public:
  struct Factor {
    Word conj;
    Word base;
  };
  PowerProduct(int n, std::vector<Factor> factors) : n_(n), factors_(std::move(factors)) {}
  std::string name() const override { return "PowerProduct"; }
  bool sound() const override { return true; }
  Certificate certify(const Word& w) const override;

 private:
  int n_;
  std::vector<Factor> factors_;
};

// Exponent sums mod n.  Passing is only necessary for triviality, so the
// best answer it gives is NecessaryOnly; failing proves nontriviality.
class ExponentAbelianized : public ARelatorOracle {
 public:
  ExponentAbelianized(int n, int rank) : n_(n), rank_(rank) {}
  std::string name() const override { return "ExponentAbelianized"; }
  bool sound() const override { return false; }
  Certificate certify(const Word& w) const override;

 private:
  int n_;
  int rank_;
};

}  // namespace smf
