#include "revsem/sentiment.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

#include "revsem/errors.hpp"

namespace revsem {

namespace {

bool is_word_char(unsigned char c) {
    // Bytes >= 0x80 keep multi-byte UTF-8 sequences together as opaque
    // tokens; they carry no polarity.
    return std::isalnum(c) || c == '\'' || c >= 0x80;
}

const std::vector<std::string>& abbreviations() {
    static const std::vector<std::string> kAbbrev = {"mr",  "mrs", "ms", "dr", "prof",
                                                     "vs",  "etc", "eg", "ie", "st",
                                                     "no",  "approx", "inc", "ltd"};
    return kAbbrev;
}

std::string lowercase(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

}  // namespace

std::vector<Sentence> split_sentences(const std::string& text) {
    std::vector<Sentence> sentences;
    Sentence current;
    std::string word;
    int clause = 0;

    auto flush_word = [&] {
        if (!word.empty()) {
            current.push_back(Token{lowercase(word), clause});
            word.clear();
        }
    };
    auto flush_sentence = [&] {
        flush_word();
        if (!current.empty()) {
            sentences.push_back(std::move(current));
            current.clear();
        }
        clause = 0;
    };

    for (std::size_t i = 0; i < text.size(); ++i) {
        unsigned char c = text[i];
        if (is_word_char(c)) {
            word.push_back(static_cast<char>(c));
        } else if (c == ',' || c == ';') {
            flush_word();
            clause++;
        } else if (c == '!' || c == '?') {
            flush_sentence();
        } else if (c == '.') {
            bool followed_by_space = i + 1 >= text.size() ||
                                     std::isspace(static_cast<unsigned char>(text[i + 1]));
            std::string w = lowercase(word);
            bool abbrev = w.size() == 1 ||
                          std::find(abbreviations().begin(), abbreviations().end(), w) !=
                              abbreviations().end();
            if (followed_by_space && !abbrev) flush_sentence();
            // otherwise the period is part of an abbreviation or number; the
            // word continues ("e.g." / "4.5" stay one token).
        } else {
            flush_word();
        }
    }
    flush_sentence();
    return sentences;
}

double score_sentence(const Sentence& tokens, const Lexicon& lexicon) {
    const std::size_t n = tokens.size();
    if (n == 0) return 0.0;

    // Position of the last adversative; clauses before it are damped and
    // clauses after it are amplified.
    std::ptrdiff_t adversative_pos = -1;
    for (std::size_t i = 0; i < n; ++i) {
        auto it = lexicon.shifters.find(tokens[i].text);
        if (it != lexicon.shifters.end() && it->second == ShifterClass::adversative)
            adversative_pos = static_cast<std::ptrdiff_t>(i);
    }

    const double aw = lexicon.amplifier_weight;
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        auto pol = lexicon.polarity.find(tokens[i].text);
        if (pol == lexicon.polarity.end() || pol->second == 0.0) continue;
        double w = pol->second;

        int negators = 0, amplifiers = 0, deamplifiers = 0;
        auto inspect = [&](std::size_t j) {
            if (tokens[j].clause != tokens[i].clause) return;
            auto sh = lexicon.shifters.find(tokens[j].text);
            if (sh == lexicon.shifters.end()) return;
            switch (sh->second) {
                case ShifterClass::negator: negators++; break;
                case ShifterClass::amplifier: amplifiers++; break;
                case ShifterClass::deamplifier: deamplifiers++; break;
                case ShifterClass::adversative: break;
            }
        };
        for (int k = 1; k <= lexicon.window_before && static_cast<std::ptrdiff_t>(i) - k >= 0; ++k)
            inspect(i - k);
        for (int k = 1; k <= lexicon.window_after && i + k < n; ++k)
            inspect(i + k);

        w *= std::pow(1.0 + aw, amplifiers);
        w *= std::pow(std::max(0.0, 1.0 - aw), deamplifiers);
        if (negators % 2 == 1) w = -w;
        if (adversative_pos >= 0) {
            if (static_cast<std::ptrdiff_t>(i) < adversative_pos) w *= (1.0 - aw);
            else if (static_cast<std::ptrdiff_t>(i) > adversative_pos) w *= (1.0 + aw);
        }
        sum += w;
    }
    return sum / std::sqrt(static_cast<double>(n));
}

ReviewSentiment score_review(const std::string& text, const Lexicon& lexicon) {
    ReviewSentiment result;
    for (const auto& sentence : split_sentences(text))
        result.sentence_scores.push_back(score_sentence(sentence, lexicon));
    if (!result.sentence_scores.empty()) {
        double total = 0.0;
        for (double s : result.sentence_scores) total += s;
        result.average = total / static_cast<double>(result.sentence_scores.size());
    }
    return result;
}

Lexicon Lexicon::from_stream(std::istream& in) {
    Lexicon lex;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        std::size_t sep = line.find_first_of(",\t");
        if (sep == std::string::npos)
            throw DataError("lexicon line " + std::to_string(lineno) + " missing delimiter");
        std::string token = lowercase(line.substr(0, sep));
        std::string rest = line.substr(sep + 1);
        if (rest == "negator") lex.shifters[token] = ShifterClass::negator;
        else if (rest == "amplifier") lex.shifters[token] = ShifterClass::amplifier;
        else if (rest == "deamplifier") lex.shifters[token] = ShifterClass::deamplifier;
        else if (rest == "adversative") lex.shifters[token] = ShifterClass::adversative;
        else {
            double w;
            try {
                w = std::stod(rest);
            } catch (const std::exception&) {
                throw DataError("lexicon line " + std::to_string(lineno) +
                                ": expected weight or shifter class, got '" + rest + "'");
            }
            if (w < -1.0 || w > 1.0)
                throw DataError("lexicon line " + std::to_string(lineno) +
                                ": weight outside [-1, 1]");
            lex.polarity[token] = w;
        }
    }
    return lex;
}

Lexicon Lexicon::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open lexicon: " + path);
    return from_stream(in);
}

Lexicon Lexicon::micro() {
    Lexicon lex;
    lex.polarity = {{"love", 0.75}, {"hate", -0.75}, {"good", 0.5}, {"bad", -0.5}};
    lex.shifters = {{"not", ShifterClass::negator},
                    {"never", ShifterClass::negator},
                    {"don't", ShifterClass::negator},
                    {"very", ShifterClass::amplifier}};
    return lex;
}

Lexicon Lexicon::bundled_default() {
    static const char* kData =
        "# polarity\n"
        "love,0.75\nloved,0.75\nlovely,0.6\nlike,0.4\nliked,0.4\nawesome,0.9\n"
        "amazing,0.85\nexcellent,0.9\ngreat,0.7\ngood,0.5\nnice,0.5\nbest,0.8\n"
        "better,0.4\nfantastic,0.85\nwonderful,0.8\nperfect,0.9\nhelpful,0.5\n"
        "fast,0.4\nsmooth,0.5\neasy,0.45\nconvenient,0.5\nreliable,0.55\n"
        "friendly,0.5\nclean,0.4\nfresh,0.4\nquick,0.4\nhappy,0.6\nsatisfied,0.6\n"
        "recommend,0.55\nrecommended,0.55\nthanks,0.4\nthank,0.4\nsuper,0.6\n"
        "cool,0.45\nenjoy,0.5\nenjoyed,0.5\nimpressive,0.6\nworks,0.3\nworked,0.3\n"
        "hate,-0.75\nhated,-0.75\nterrible,-0.85\nhorrible,-0.85\nawful,-0.85\n"
        "worst,-0.9\nbad,-0.5\npoor,-0.55\nuseless,-0.7\nwaste,-0.65\n"
        "slow,-0.45\nbuggy,-0.6\nbug,-0.4\nbugs,-0.45\ncrash,-0.7\ncrashes,-0.7\n"
        "crashed,-0.7\nbroken,-0.65\nfail,-0.6\nfails,-0.6\nfailed,-0.6\n"
        "fraud,-0.85\nscam,-0.9\nfake,-0.7\ncheat,-0.75\ncheated,-0.75\n"
        "refund,-0.3\npathetic,-0.8\ndisappointing,-0.65\ndisappointed,-0.65\n"
        "annoying,-0.55\nirritating,-0.55\nspam,-0.6\nads,-0.3\nexpensive,-0.4\n"
        "late,-0.4\ndelay,-0.45\ndelayed,-0.45\nwrong,-0.45\nmissing,-0.45\n"
        "stupid,-0.65\ndumb,-0.6\ntrash,-0.8\ngarbage,-0.8\nrude,-0.6\n"
        "problem,-0.4\nproblems,-0.45\nissue,-0.35\nissues,-0.4\nstuck,-0.45\n"
        "# shifters\n"
        "not,negator\nnever,negator\nno,negator\nnone,negator\ndon't,negator\n"
        "dont,negator\ndoesn't,negator\ndoesnt,negator\ndidn't,negator\n"
        "didnt,negator\nwon't,negator\nwont,negator\ncan't,negator\ncant,negator\n"
        "isn't,negator\nisnt,negator\nwasn't,negator\nwasnt,negator\n"
        "hardly,negator\nbarely,negator\n"
        "very,amplifier\nreally,amplifier\nextremely,amplifier\nso,amplifier\n"
        "totally,amplifier\nabsolutely,amplifier\nhighly,amplifier\ntoo,amplifier\n"
        "slightly,deamplifier\nsomewhat,deamplifier\nkinda,deamplifier\n"
        "rather,deamplifier\nbit,deamplifier\n"
        "but,adversative\nhowever,adversative\nalthough,adversative\nyet,adversative\n";
    std::istringstream in(kData);
    return from_stream(in);
}

}  // namespace revsem
