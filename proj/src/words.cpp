#include "gog/words.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

namespace gog {

namespace {

void push_reduced(std::vector<Letter>& stack, Letter letter) {
  if (!stack.empty() && stack.back() == inverse_letter(letter)) {
    stack.pop_back();
  } else {
    stack.push_back(letter);
  }
}

// Start of the least rotation under letter_key.
std::size_t least_rotation(const std::vector<Letter>& s) {
  std::size_t const n = s.size();
  std::size_t i = 0;
  std::size_t j = 1;
  std::size_t k = 0;
  while (i < n && j < n && k < n) {
    int a = letter_key(s[(i + k) % n]);
    int b = letter_key(s[(j + k) % n]);
    if (a == b) {
      ++k;
      continue;
    }
    if (a > b) {
      i += k + 1;
    } else {
      j += k + 1;
    }
    if (i == j) {
      ++j;
    }
    k = 0;
  }
  return std::min(i, j);
}

// Number of letters peeled from each end to reach the cyclic core.
std::size_t cyclic_peel(const std::vector<Letter>& w) {
  std::size_t m = 0;
  std::size_t const n = w.size();
  while (2 * m + 1 < n && w[m] == inverse_letter(w[n - 1 - m])) {
    ++m;
  }
  return m;
}

}  // namespace

FreeWord FreeWord::from_letters(std::span<const Letter> letters) {
  FreeWord result;
  result.letters_.reserve(letters.size());
  for (Letter letter : letters) {
    if (letter == 0) {
      throw std::invalid_argument("letter 0 is not a generator");
    }
    push_reduced(result.letters_, letter);
  }
  return result;
}

FreeWord FreeWord::generator(std::size_t index, int sign) {
  FreeWord result;
  result.letters_.push_back(letter_of(index, sign));
  return result;
}

FreeWord FreeWord::inverse() const {
  FreeWord result;
  result.letters_.reserve(letters_.size());
  for (auto it = letters_.rbegin(); it != letters_.rend(); ++it) {
    result.letters_.push_back(inverse_letter(*it));
  }
  return result;
}

FreeWord FreeWord::pow(long exponent) const {
  if (exponent < 0) {
    return inverse().pow(-exponent);
  }
  FreeWord result;
  for (long i = 0; i < exponent; ++i) {
    result *= *this;
  }
  return result;
}

FreeWord& FreeWord::operator*=(const FreeWord& rhs) {
  std::size_t i = 0;
  while (i < rhs.letters_.size() && !letters_.empty() &&
         letters_.back() == inverse_letter(rhs.letters_[i])) {
    letters_.pop_back();
    ++i;
  }
  letters_.insert(letters_.end(), rhs.letters_.begin() + static_cast<std::ptrdiff_t>(i),
                  rhs.letters_.end());
  return *this;
}

FreeWord& FreeWord::append(Letter letter) {
  push_reduced(letters_, letter);
  return *this;
}

bool shortlex_less(const FreeWord& lhs, const FreeWord& rhs) {
  if (lhs.size() != rhs.size()) {
    return lhs.size() < rhs.size();
  }
  return std::lexicographical_compare(
      lhs.letters().begin(), lhs.letters().end(), rhs.letters().begin(), rhs.letters().end(),
      [](Letter a, Letter b) { return letter_key(a) < letter_key(b); });
}

FreeWord concat_reduce(const FreeWord& lhs, const FreeWord& rhs) { return lhs * rhs; }

CyclicWord::CyclicWord(const FreeWord& word) {
  auto const& w = word.letters();
  std::size_t m = cyclic_peel(w);
  std::vector<Letter> core(w.begin() + static_cast<std::ptrdiff_t>(m),
                           w.end() - static_cast<std::ptrdiff_t>(m));
  if (!core.empty()) {
    std::rotate(core.begin(), core.begin() + static_cast<std::ptrdiff_t>(least_rotation(core)),
                core.end());
  }
  letters_ = std::move(core);
}

CyclicReduction cyclic_reduce(const FreeWord& word) {
  auto const& w = word.letters();
  std::size_t m = cyclic_peel(w);
  std::vector<Letter> head(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(m));
  std::vector<Letter> core(w.begin() + static_cast<std::ptrdiff_t>(m),
                           w.end() - static_cast<std::ptrdiff_t>(m));
  CyclicReduction result;
  result.conjugator = FreeWord::from_letters(head);
  result.core = FreeWord::from_letters(core);
  result.cyclic = CyclicWord(result.core);
  return result;
}

std::size_t cyclic_length(const FreeWord& word) {
  return word.size() - 2 * cyclic_peel(word.letters());
}

PrimitiveRoot primitive_root(const FreeWord& word) {
  if (word.empty()) {
    throw std::invalid_argument("trivial word has no root");
  }
  auto reduction = cyclic_reduce(word);
  auto const& core = reduction.core.letters();
  std::size_t const n = core.size();
  // Prefix function gives the least period of the core.
  std::vector<std::size_t> prefix(n, 0);
  for (std::size_t i = 1; i < n; ++i) {
    std::size_t k = prefix[i - 1];
    while (k > 0 && core[i] != core[k]) {
      k = prefix[k - 1];
    }
    if (core[i] == core[k]) {
      ++k;
    }
    prefix[i] = k;
  }
  std::size_t period = n - prefix[n - 1];
  if (n % period != 0) {
    period = n;
  }
  PrimitiveRoot result;
  result.exponent = static_cast<long>(n / period);
  auto root_core =
      FreeWord::from_letters(std::span<const Letter>(core.data(), period));
  result.root = reduction.conjugator * root_core * reduction.conjugator.inverse();
  return result;
}

std::optional<FreeWord> conjugacy_witness(const FreeWord& u, const FreeWord& w) {
  if (u.empty() || w.empty()) {
    if (u.empty() && w.empty()) {
      return FreeWord{};
    }
    return std::nullopt;
  }
  auto ru = cyclic_reduce(u);
  auto rw = cyclic_reduce(w);
  if (ru.core.size() != rw.core.size()) {
    return std::nullopt;
  }
  std::vector<Letter> doubled = ru.core.letters();
  doubled.insert(doubled.end(), ru.core.letters().begin(), ru.core.letters().end());
  auto hit = std::search(doubled.begin(), doubled.end(), rw.core.letters().begin(),
                         rw.core.letters().end());
  if (hit == doubled.end()) {
    return std::nullopt;
  }
  auto shift = static_cast<std::size_t>(hit - doubled.begin());
  // core_w == p^-1 core_u p with p the first `shift` letters of core_u.
  auto prefix = FreeWord::from_letters(
      std::span<const Letter>(ru.core.letters().data(), shift));
  return rw.conjugator * prefix.inverse() * ru.conjugator.inverse();
}

std::optional<long> cyclic_subgroup_member(const FreeWord& w, const FreeWord& u) {
  if (u.empty()) {
    throw std::invalid_argument("cyclic subgroup generator must be non-trivial");
  }
  if (w.empty()) {
    return 0L;
  }
  auto root_u = primitive_root(u);
  auto root_w = primitive_root(w);
  long total = 0;
  if (root_w.root == root_u.root) {
    total = root_w.exponent;
  } else if (root_w.root == root_u.root.inverse()) {
    total = -root_w.exponent;
  } else {
    return std::nullopt;
  }
  if (total % root_u.exponent != 0) {
    return std::nullopt;
  }
  return total / root_u.exponent;
}

Basis::Basis(std::string names, std::vector<Rational> weights)
    : names_(std::move(names)), weights_(std::move(weights)) {
  if (weights_.empty()) {
    weights_.assign(names_.size(), Rational(1));
  }
  if (weights_.size() != names_.size()) {
    throw std::invalid_argument("basis weights do not match generators");
  }
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (!std::islower(static_cast<unsigned char>(names_[i]))) {
      throw std::invalid_argument(std::string("generator name must be a lowercase letter: '") +
                                  names_[i] + "'");
    }
    if (names_.find(names_[i]) != i) {
      throw std::invalid_argument(std::string("duplicate generator '") + names_[i] + "'");
    }
    if (weights_[i] <= Rational(0)) {
      throw std::invalid_argument(std::string("weight of '") + names_[i] + "' must be positive");
    }
  }
}

std::optional<std::size_t> Basis::index_of(char name) const {
  auto pos = names_.find(name);
  if (pos == std::string::npos) {
    return std::nullopt;
  }
  return pos;
}

Basis Basis::with_weights(std::vector<Rational> weights) const {
  return Basis(names_, std::move(weights));
}

FreeWord Basis::parse(std::string_view text) const {
  if (text == "1" || text.empty()) {
    return {};
  }
  std::vector<Letter> letters;
  letters.reserve(text.size());
  for (char c : text) {
    bool upper = std::isupper(static_cast<unsigned char>(c)) != 0;
    char lower = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    auto index = index_of(lower);
    if (!index) {
      throw std::invalid_argument(std::string("unknown generator '") + c + "' in word '" +
                                  std::string(text) + "'");
    }
    letters.push_back(letter_of(*index, upper ? -1 : 1));
  }
  return FreeWord::from_letters(letters);
}

std::string Basis::format(const FreeWord& word) const {
  if (word.empty()) {
    return "1";
  }
  std::string out;
  out.reserve(word.size());
  for (Letter letter : word.letters()) {
    char c = names_.at(generator_of(letter));
    out.push_back(letter < 0 ? static_cast<char>(std::toupper(static_cast<unsigned char>(c))) : c);
  }
  return out;
}

Rational weighted_length(const CyclicWord& word, const Basis& basis) {
  Rational total(0);
  for (Letter letter : word.letters()) {
    total += basis.weight(generator_of(letter));
  }
  return total;
}

Rational weighted_length(const FreeWord& word, const Basis& basis) {
  Rational total(0);
  for (Letter letter : word.letters()) {
    total += basis.weight(generator_of(letter));
  }
  return total;
}

Rational weighted_cyclic_length(const FreeWord& word, const Basis& basis) {
  auto const& w = word.letters();
  std::size_t m = cyclic_peel(w);
  Rational total(0);
  for (std::size_t i = m; i + m < w.size(); ++i) {
    total += basis.weight(generator_of(w[i]));
  }
  return total;
}

BasisMap BasisMap::identity(std::size_t rank) {
  std::vector<FreeWord> images;
  images.reserve(rank);
  for (std::size_t i = 0; i < rank; ++i) {
    images.push_back(FreeWord::generator(i));
  }
  return BasisMap(std::move(images));
}

BasisMap BasisMap::inner(const FreeWord& conjugator, std::size_t rank) {
  std::vector<FreeWord> images;
  images.reserve(rank);
  for (std::size_t i = 0; i < rank; ++i) {
    images.push_back(conjugator * FreeWord::generator(i) * conjugator.inverse());
  }
  return BasisMap(std::move(images));
}

FreeWord BasisMap::operator()(const FreeWord& word) const {
  std::vector<Letter> stack;
  for (Letter letter : word.letters()) {
    auto const& img = images_.at(generator_of(letter)).letters();
    if (letter > 0) {
      for (Letter x : img) {
        push_reduced(stack, x);
      }
    } else {
      for (auto it = img.rbegin(); it != img.rend(); ++it) {
        push_reduced(stack, inverse_letter(*it));
      }
    }
  }
  return FreeWord::from_letters(stack);
}

BasisMap compose(const BasisMap& outer, const BasisMap& inner) {
  std::vector<FreeWord> images;
  images.reserve(inner.rank());
  for (auto const& img : inner.images()) {
    images.push_back(outer(img));
  }
  return BasisMap(std::move(images));
}

namespace {

struct NielsenTuple {
  std::vector<FreeWord> words;
  std::vector<FreeWord> tracks;

  FreeWord candidate(std::size_t i, std::size_t j, int sign, bool left) const {
    auto factor = sign > 0 ? words[j] : words[j].inverse();
    return left ? factor * words[i] : words[i] * factor;
  }

  void apply(std::size_t i, std::size_t j, int sign, bool left) {
    auto factor = sign > 0 ? words[j] : words[j].inverse();
    auto track = sign > 0 ? tracks[j] : tracks[j].inverse();
    words[i] = left ? factor * words[i] : words[i] * factor;
    tracks[i] = left ? track * tracks[i] : tracks[i] * track;
  }

  // Applies one length-decreasing elementary move if any exists.
  bool decrease() {
    std::size_t const n = words.size();
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (i == j) continue;
        for (int sign : {1, -1}) {
          for (bool left : {false, true}) {
            if (candidate(i, j, sign, left).size() < words[i].size()) {
              apply(i, j, sign, left);
              return true;
            }
          }
        }
      }
    }
    return false;
  }
};

}  // namespace

std::optional<BasisMap> invert(const BasisMap& map) {
  std::size_t const n = map.rank();
  NielsenTuple tuple;
  tuple.words = map.images();
  for (std::size_t i = 0; i < n; ++i) {
    if (tuple.words[i].empty()) {
      return std::nullopt;
    }
    tuple.tracks.push_back(FreeWord::generator(i));
  }
  constexpr int kMaxRounds = 100000;
  for (int round = 0; round < kMaxRounds; ++round) {
    if (tuple.decrease()) {
      continue;
    }
    bool done = std::all_of(tuple.words.begin(), tuple.words.end(),
                            [](const FreeWord& w) { return w.size() == 1; });
    if (done) {
      break;
    }
    // Depth-two escape: a length-preserving move followed by a decreasing one.
    bool escaped = false;
    for (std::size_t i = 0; i < n && !escaped; ++i) {
      for (std::size_t j = 0; j < n && !escaped; ++j) {
        if (i == j) continue;
        for (int sign : {1, -1}) {
          for (bool left : {false, true}) {
            if (escaped || tuple.candidate(i, j, sign, left).size() != tuple.words[i].size()) {
              continue;
            }
            NielsenTuple trial = tuple;
            trial.apply(i, j, sign, left);
            if (trial.decrease()) {
              tuple = std::move(trial);
              escaped = true;
            }
          }
        }
      }
    }
    if (!escaped) {
      return std::nullopt;
    }
  }
  std::vector<FreeWord> inverse_images(n);
  std::vector<bool> seen(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    if (tuple.words[i].size() != 1) {
      return std::nullopt;
    }
    Letter letter = tuple.words[i][0];
    std::size_t g = generator_of(letter);
    if (g >= n || seen[g]) {
      return std::nullopt;
    }
    seen[g] = true;
    inverse_images[g] = letter > 0 ? tuple.tracks[i] : tuple.tracks[i].inverse();
  }
  BasisMap result(std::move(inverse_images));
  if (compose(map, result) != BasisMap::identity(n)) {
    return std::nullopt;
  }
  return result;
}

BasisMap power(const BasisMap& map, long exponent) {
  if (exponent < 0) {
    auto inv = invert(map);
    if (!inv) {
      throw std::invalid_argument("negative power of a non-invertible map");
    }
    return power(*inv, -exponent);
  }
  auto result = BasisMap::identity(map.rank());
  for (long i = 0; i < exponent; ++i) {
    result = compose(map, result);
  }
  return result;
}

InnerDifference inner_difference(const BasisMap& phi, const BasisMap& psi) {
  if (phi.rank() != psi.rank()) {
    throw std::invalid_argument("inner_difference: rank mismatch");
  }
  if (!invert(phi) || !invert(psi)) {
    throw std::invalid_argument("inner_difference: input is not bijective");
  }
  InnerDifference result;
  std::size_t const n = phi.rank();
  if (n == 0) {
    result.witness = FreeWord{};
    return result;
  }
  auto g0 = conjugacy_witness(phi.image(0), psi.image(0));
  if (!g0) {
    return result;
  }
  auto matches = [&](const FreeWord& g) {
    auto g_inv = g.inverse();
    for (std::size_t i = 0; i < n; ++i) {
      if (g * phi.image(i) * g_inv != psi.image(i)) {
        return false;
      }
    }
    return true;
  };
  if (n == 1) {
    if (matches(*g0)) {
      result.witness = *g0;
    }
    return result;
  }
  // Candidates g0 * r^k with r the root of phi(x0), i.e. its centralizer.
  auto root = primitive_root(phi.image(0)).root;
  long bound = -1;
  for (std::size_t i = 1; i < n; ++i) {
    long b = static_cast<long>(g0->size() + psi.image(i).size() + phi.image(i).size() +
                               2 * phi.image(0).size()) + 4;
    bound = bound < 0 ? b : std::min(bound, b);
  }
  result.exponent_bound = bound;
  auto step = root;
  auto forward = *g0;
  auto backward = *g0;
  if (matches(forward)) {
    result.witness = forward;
    return result;
  }
  for (long k = 1; k <= bound; ++k) {
    forward *= step;
    backward *= step.inverse();
    if (matches(forward)) {
      result.witness = forward;
      return result;
    }
    if (matches(backward)) {
      result.witness = backward;
      return result;
    }
  }
  return result;
}

}  // namespace gog
