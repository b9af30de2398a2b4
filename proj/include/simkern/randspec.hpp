#pragma once

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "simkern/errors.hpp"
#include "simkern/rng.hpp"

namespace simkern {

// One `$distribution(...)$` region of a randomization spec.
//
//   k1 = $gauss(8,2, name='decayConstant1')$;
//
// gauss(mean, stdev), uniform(lo, hi), uniformint(lo, hi) and
// choice(v1;v2;...) are supported. Choice candidates are separated with
// ';' so they cannot be confused with argument commas.
struct RandToken {
    enum class Kind { gauss, uniform, uniform_int, choice };
    Kind kind;
    std::vector<double> args;
    std::string name;
    std::size_t begin = 0;  // byte offsets into the source text, [begin,end)
    std::size_t end = 0;
};

struct RandSpec {
    std::string source_text;
    std::vector<RandToken> tokens;  // ordered, disjoint spans
};

struct ParamAssignment {
    std::map<std::string, double> values;
    std::uint64_t seed = 0;
};

namespace detail {

inline void skip_ws(std::string_view s, std::size_t& i) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
}

inline double parse_number(std::string_view s, std::size_t& i, const std::string& ctx) {
    skip_ws(s, i);
    std::size_t j = i;
    if (j < s.size() && (s[j] == '+' || s[j] == '-')) ++j;
    while (j < s.size() && (std::isdigit(static_cast<unsigned char>(s[j])) || s[j] == '.' ||
                            s[j] == 'e' || s[j] == 'E' ||
                            ((s[j] == '+' || s[j] == '-') && (s[j - 1] == 'e' || s[j - 1] == 'E'))))
        ++j;
    double out = 0.0;
    auto res = std::from_chars(s.data() + i, s.data() + j, out);
    if (res.ec != std::errc() || res.ptr == s.data() + i)
        throw MalformedToken("expected a number in " + ctx);
    i = static_cast<std::size_t>(res.ptr - s.data());
    return out;
}

// name='x'  or  name=`x'  (the latter is TeX-style quoting)
inline std::string parse_name_arg(std::string_view s, std::size_t& i, const std::string& ctx) {
    skip_ws(s, i);
    if (s.substr(i, 5) != "name=") throw MalformedToken("expected name= in " + ctx);
    i += 5;
    skip_ws(s, i);
    if (i >= s.size() || (s[i] != '\'' && s[i] != '`'))
        throw MalformedToken("expected quoted name in " + ctx);
    ++i;
    std::size_t start = i;
    while (i < s.size() && s[i] != '\'') ++i;
    if (i >= s.size()) throw MalformedToken("unterminated name quote in " + ctx);
    std::string name(s.substr(start, i - start));
    ++i;
    if (name.empty()) throw MalformedToken("empty token name in " + ctx);
    return name;
}

inline RandToken parse_token_body(std::string_view body, std::size_t begin, std::size_t end) {
    const std::string ctx = "token `" + std::string(body) + "`";
    std::size_t i = 0;
    skip_ws(body, i);
    std::size_t ks = i;
    while (i < body.size() && std::isalpha(static_cast<unsigned char>(body[i]))) ++i;
    std::string kind_str(body.substr(ks, i - ks));

    RandToken tok;
    tok.begin = begin;
    tok.end = end;
    int arity = 0;
    char sep = ',';
    if (kind_str == "gauss") {
        tok.kind = RandToken::Kind::gauss;
        arity = 2;
    } else if (kind_str == "uniform") {
        tok.kind = RandToken::Kind::uniform;
        arity = 2;
    } else if (kind_str == "uniformint") {
        tok.kind = RandToken::Kind::uniform_int;
        arity = 2;
    } else if (kind_str == "choice") {
        tok.kind = RandToken::Kind::choice;
        arity = -1;  // one or more, ';'-separated
        sep = ';';
    } else {
        throw MalformedToken("unknown distribution `" + kind_str + "` in " + ctx);
    }

    skip_ws(body, i);
    if (i >= body.size() || body[i] != '(') throw MalformedToken("expected ( in " + ctx);
    ++i;
    while (true) {
        skip_ws(body, i);
        if (arity == -1 && !tok.args.empty() && i < body.size() && body[i] == ',') break;
        tok.args.push_back(parse_number(body, i, ctx));
        skip_ws(body, i);
        if (i < body.size() && body[i] == sep) {
            // at full arity the ',' belongs to the name argument
            if (arity != -1 && static_cast<int>(tok.args.size()) == arity) break;
            ++i;
            continue;
        }
        break;
    }
    if (arity != -1 && static_cast<int>(tok.args.size()) != arity)
        throw MalformedToken("wrong argument count for " + kind_str + " in " + ctx);
    skip_ws(body, i);
    if (i >= body.size() || body[i] != ',') throw MalformedToken("expected ,name=... in " + ctx);
    ++i;
    tok.name = parse_name_arg(body, i, ctx);
    skip_ws(body, i);
    if (i >= body.size() || body[i] != ')') throw MalformedToken("expected ) in " + ctx);
    ++i;
    skip_ws(body, i);
    if (i != body.size()) throw MalformedToken("trailing characters in " + ctx);

    // distribution-specific sanity
    switch (tok.kind) {
        case RandToken::Kind::gauss:
            if (!(tok.args[1] > 0.0)) throw MalformedToken("gauss stdev must be > 0 in " + ctx);
            break;
        case RandToken::Kind::uniform:
        case RandToken::Kind::uniform_int:
            if (!(tok.args[0] <= tok.args[1]))
                throw MalformedToken("low must be <= high in " + ctx);
            break;
        case RandToken::Kind::choice:
            break;
    }
    return tok;
}

}  // namespace detail

inline RandSpec parse_spec(const std::string& text) {
    RandSpec spec;
    spec.source_text = text;
    std::set<std::string> seen;
    std::size_t i = 0;
    while (i < text.size()) {
        if (text[i] != '$') {
            ++i;
            continue;
        }
        std::size_t close = text.find('$', i + 1);
        if (close == std::string::npos)
            throw MalformedToken("unbalanced $ starting at offset " + std::to_string(i));
        RandToken tok = detail::parse_token_body(
            std::string_view(text).substr(i + 1, close - i - 1), i, close + 1);
        if (!seen.insert(tok.name).second)
            throw DuplicateName("duplicate token name `" + tok.name + "`");
        spec.tokens.push_back(std::move(tok));
        i = close + 1;
    }
    return spec;
}

// One value per token, drawn in document order. Each token gets its own
// counter-based substream of `seed`, so the result is a pure function of
// (spec, seed).
inline ParamAssignment instantiate(const RandSpec& spec, std::uint64_t seed) {
    ParamAssignment a;
    a.seed = seed;
    for (std::size_t t = 0; t < spec.tokens.size(); ++t) {
        const RandToken& tok = spec.tokens[t];
        Rng rng = Rng::from_path(seed, {hash_str("randspec"), t});
        double v = 0.0;
        switch (tok.kind) {
            case RandToken::Kind::gauss:
                v = rng.gauss(tok.args[0], tok.args[1]);
                break;
            case RandToken::Kind::uniform:
                v = rng.uniform(tok.args[0], tok.args[1]);
                break;
            case RandToken::Kind::uniform_int:
                v = static_cast<double>(rng.uniform_int(static_cast<std::int64_t>(tok.args[0]),
                                                        static_cast<std::int64_t>(tok.args[1])));
                break;
            case RandToken::Kind::choice:
                v = tok.args[rng.index(tok.args.size())];
                break;
        }
        a.values[tok.name] = v;
    }
    return a;
}

// Shortest round-trip decimal rendering, so rendered files are bit-stable.
inline std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

inline std::string render(const RandSpec& spec, const ParamAssignment& a) {
    std::string out;
    out.reserve(spec.source_text.size());
    std::size_t pos = 0;
    for (const RandToken& tok : spec.tokens) {
        auto it = a.values.find(tok.name);
        if (it == a.values.end()) throw MissingValue("no value for token `" + tok.name + "`");
        out.append(spec.source_text, pos, tok.begin - pos);
        out.append(format_double(it->second));
        pos = tok.end;
    }
    out.append(spec.source_text, pos, std::string::npos);
    return out;
}

}  // namespace simkern
