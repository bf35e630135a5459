#pragma once

#include <iosfwd>
#include <string>
#include <unordered_map>
#include <vector>

namespace revsem {

enum class ShifterClass { negator, amplifier, deamplifier, adversative };

/// Polarity weights plus valence-shifter configuration. All scoring
/// constants live here so results are exactly reproducible.
struct Lexicon {
    std::unordered_map<std::string, double> polarity;  // weights in [-1, 1]
    std::unordered_map<std::string, ShifterClass> shifters;
    double amplifier_weight = 0.8;
    int window_before = 4;
    int window_after = 2;

    static Lexicon from_stream(std::istream& in);
    static Lexicon from_file(const std::string& path);
    /// Tiny fixed lexicon used by the test suite.
    static Lexicon micro();
    /// Bundled general-purpose English lexicon.
    static Lexicon bundled_default();
};

/// One token plus the index of the comma-delimited clause it belongs to;
/// shifter windows never cross clause boundaries.
struct Token {
    std::string text;
    int clause = 0;
};

using Sentence = std::vector<Token>;

struct ReviewSentiment {
    std::vector<double> sentence_scores;
    double average = 0.0;
};

/// Splits on terminal punctuation (. ! ?). A period does not terminate a
/// sentence when it follows a known abbreviation (mr, mrs, dr, vs, etc, eg,
/// ie, st, no) or a single letter, or when no whitespace follows it (so
/// "4.5" and "e.g." stay intact). Tokens are lowercased with surrounding
/// punctuation stripped; text with no terminal mark is one sentence.
std::vector<Sentence> split_sentences(const std::string& text);

double score_sentence(const Sentence& tokens, const Lexicon& lexicon);

ReviewSentiment score_review(const std::string& text, const Lexicon& lexicon);

}  // namespace revsem
