#pragma once

#include "artsyn/common.hpp"

#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace artsyn {

/// Fixed per-phone attribute bits, in encoding order.
struct PhoneAttributes {
  bool vowel = false;
  bool consonant = false;
  bool voiced = false;
  bool nasal = false;
  bool fricative = false;
  bool silence = false;
};
inline constexpr int kAttributeCount = 6;

/// The phone set: symbols plus attribute flags. File format: one phone per
/// line, "SYMBOL flag flag ...", '#' comments. Exactly one symbol must
/// carry the `silence` flag.
class PhoneInventory {
public:
  static PhoneInventory from_lines(const std::vector<std::string>& lines);
  static PhoneInventory load(const std::string& path);
  void save(const std::string& path) const;

  /// Bundled inventory: "sil" plus the letters A-Z, so the letter fallback
  /// is total. Vowels are A E I O U.
  static PhoneInventory builtin_toy();

  int size() const { return static_cast<int>(symbols_.size()); }
  const std::string& symbol(int id) const { return symbols_[static_cast<std::size_t>(id)]; }
  const PhoneAttributes& attributes(int id) const { return attrs_[static_cast<std::size_t>(id)]; }
  std::optional<int> id_of(const std::string& symbol) const;
  int silence_id() const { return silence_id_; }

private:
  std::vector<std::string> symbols_;
  std::vector<PhoneAttributes> attrs_;
  std::unordered_map<std::string, int> index_;
  int silence_id_ = -1;
};

/// Word-to-phones dictionary. File format: "word<TAB>phone phone ...".
class Lexicon {
public:
  Lexicon() = default;
  static Lexicon load(const std::string& path);
  void save(const std::string& path) const;

  void add(const std::string& word, std::vector<std::string> phones);
  const std::vector<std::string>* lookup(const std::string& word) const;
  std::size_t size() const { return entries_.size(); }

private:
  std::map<std::string, std::vector<std::string>> entries_;
};

struct PhoneInstance {
  int phone = 0;
  int word_index = 0;     // silences count as one-phone words
  int index_in_word = 0;
  int word_length = 1;
};

struct PhoneSeq {
  std::vector<PhoneInstance> phones;
  int word_count = 0;

  bool empty() const { return phones.empty(); }
  int size() const { return static_cast<int>(phones.size()); }
};

/// Lowercased whitespace tokenization with lexicon lookup; out-of-vocabulary
/// words fall back to a letter-to-phone identity mapping. Silence is
/// inserted at utterance edges and at punctuation; consecutive silences
/// collapse.
PhoneSeq text_to_phones(const std::string& text, const Lexicon& lexicon,
                        const PhoneInventory& inventory);

/// Builds a PhoneSeq from a bare symbol sequence; maximal runs of
/// non-silence phones between silences form the words.
PhoneSeq phone_seq_from_symbols(const std::vector<std::string>& symbols,
                                const PhoneInventory& inventory);

/// Width of one linguistic vector: triphone one-hots over inventory plus a
/// reserved boundary symbol, the attribute bits, and four positional slots
/// (phone-in-word, word-in-utterance, then the two frame-level slots:
/// within-phone fraction and phone duration, zero at phone level).
int linguistic_width(const PhoneInventory& inventory);

/// One vector per phone; the two frame-level slots (the last two columns)
/// are left at zero.
Matrix phone_level_vectors(const PhoneSeq& seq, const PhoneInventory& inventory);

/// Repeats each phone vector for its duration, filling the within-phone
/// fractional position (i + 0.5) / duration and the duration in frames.
Matrix upsample_to_frames(const Matrix& phone_vectors, const std::vector<int>& durations);

/// Duration label file: "phone<TAB>frames" per line.
std::vector<std::pair<std::string, int>> load_duration_labels(const std::string& path);
void save_duration_labels(const std::string& path,
                          const std::vector<std::pair<std::string, int>>& labels);

}  // namespace artsyn
