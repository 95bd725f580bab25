// Copyright 2026 The grlin Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "grlin/pretty.h"

#include <fmt/format.h>

namespace grlin {
namespace {

// Type precedence: 0 function, 1 product/sum chain, 2 postfix box, 3 atom.
void type_to(std::string& out, const Type& t, int ctx) {
  auto open = [&](int level) {
    bool paren = ctx > level;
    if (paren) out += '(';
    return paren;
  };
  switch (t->kind) {
    case TypeKind::kUnit:
      out += "Unit";
      return;
    case TypeKind::kBase:
      out += base_name(t->base);
      return;
    case TypeKind::kVar:
    case TypeKind::kRecVar:
      out += t->name;
      return;
    case TypeKind::kFun: {
      bool p = open(0);
      type_to(out, t->a, 1);
      out += " -o ";
      type_to(out, t->b, 0);
      if (p) out += ')';
      return;
    }
    case TypeKind::kTensor:
    case TypeKind::kSum: {
      bool p = open(1);
      type_to(out, t->a, 2);
      out += t->kind == TypeKind::kTensor ? " * " : " + ";
      type_to(out, t->b, t->b->kind == t->kind ? 1 : 2);
      if (p) out += ')';
      return;
    }
    case TypeKind::kBox: {
      bool p = open(2);
      type_to(out, t->a, 2);
      out += " [";
      out += show_grade(*t->grade);
      out += ']';
      if (p) out += ')';
      return;
    }
    case TypeKind::kMu: {
      bool p = open(0);
      out += "mu ";
      out += t->name;
      out += " . ";
      type_to(out, t->a, 0);
      if (p) out += ')';
      return;
    }
  }
}

void pattern_to(std::string& out, const Pattern& p, bool atomic) {
  switch (p->kind) {
    case PatKind::kVar:
      out += p->name;
      return;
    case PatKind::kWild:
      out += '_';
      return;
    case PatKind::kInt:
      out += std::to_string(p->value);
      return;
    case PatKind::kBox:
      out += '[';
      pattern_to(out, p->subs[0], false);
      out += ']';
      return;
    case PatKind::kCon:
      switch (p->con) {
        case ConKind::kUnit:
          out += "unit";
          return;
        case ConKind::kPair:
          out += '(';
          pattern_to(out, p->subs[0], false);
          out += ", ";
          pattern_to(out, p->subs[1], false);
          out += ')';
          return;
        default:
          if (atomic) out += '(';
          out += con_name(p->con);
          out += ' ';
          pattern_to(out, p->subs[0], true);
          if (atomic) out += ')';
          return;
      }
  }
}

bool is_binding_form(const Term& t) {
  const TermNode* n = t.get();
  while (n->kind == TermKind::kUse) n = n->t1.get();
  return n->kind == TermKind::kLam || n->kind == TermKind::kLetRec ||
         n->kind == TermKind::kCase;
}

// Term precedence: 0 binding forms, 1 application, 2 atom.
void term_to(std::string& out, const Term& t, int ctx) {
  switch (t->kind) {
    case TermKind::kUse:
      term_to(out, t->t1, ctx);
      return;
    case TermKind::kVar:
      out += t->name;
      return;
    case TermKind::kInt:
      out += std::to_string(t->value);
      return;
    case TermKind::kLam: {
      if (ctx > 0) out += '(';
      out += '\\';
      out += t->name;
      out += " -> ";
      term_to(out, t->t1, 0);
      if (ctx > 0) out += ')';
      return;
    }
    case TermKind::kLetRec: {
      if (ctx > 0) out += '(';
      out += "letrec ";
      out += t->name;
      out += " = ";
      term_to(out, t->t1, 0);
      out += " in ";
      term_to(out, t->t2, 0);
      if (ctx > 0) out += ')';
      return;
    }
    case TermKind::kCase: {
      if (ctx > 0) out += '(';
      out += "case ";
      term_to(out, t->t1, 1);
      out += " of ";
      for (size_t i = 0; i < t->branches.size(); ++i) {
        const Branch& b = t->branches[i];
        if (i > 0) out += "; ";
        pattern_to(out, b.pat, false);
        out += " -> ";
        bool last = i + 1 == t->branches.size();
        // A binding form in a non-final branch would swallow the `;`.
        term_to(out, b.body, !last && is_binding_form(b.body) ? 1 : 0);
      }
      if (ctx > 0) out += ')';
      return;
    }
    case TermKind::kApp: {
      if (ctx > 1) out += '(';
      term_to(out, t->t1, 1);
      out += ' ';
      term_to(out, t->t2, 2);
      if (ctx > 1) out += ')';
      return;
    }
    case TermKind::kPromote:
      out += '[';
      term_to(out, t->t1, 0);
      out += ']';
      return;
    case TermKind::kCon:
      switch (t->con) {
        case ConKind::kUnit:
          out += "unit";
          return;
        case ConKind::kPair:
          out += '(';
          term_to(out, t->t1, 0);
          out += ", ";
          term_to(out, t->t2, 0);
          out += ')';
          return;
        default:
          if (ctx > 1) out += '(';
          out += con_name(t->con);
          out += ' ';
          term_to(out, t->t1, 2);
          if (ctx > 1) out += ')';
          return;
      }
    case TermKind::kDerive:
      out += derive_name(t->derive);
      out += " @";
      type_to(out, t->type, 3);
      return;
    case TermKind::kAnn:
      out += '(';
      term_to(out, t->t1, 0);
      out += " : ";
      type_to(out, t->type, 0);
      out += ')';
      return;
  }
}

}  // namespace

std::string pretty(const Type& t) {
  std::string out;
  type_to(out, t, 0);
  return out;
}

std::string pretty(const Term& t) {
  std::string out;
  term_to(out, t, 0);
  return out;
}

std::string pretty(const Pattern& p) {
  std::string out;
  pattern_to(out, p, false);
  return out;
}

std::string pretty(const Program& p) {
  std::string out;
  if (p.semiring != SemiringId::kNatExact) {
    out += fmt::format("#semiring {}\n\n", semiring_name(p.semiring));
  }
  for (size_t i = 0; i < p.decls.size(); ++i) {
    const Decl& d = p.decls[i];
    if (i > 0) out += '\n';
    out += fmt::format("{} : {}\n{} = {}\n", d.name, pretty(d.type), d.name,
                       pretty(d.body));
  }
  return out;
}

}  // namespace grlin
