#include "stratrew/frontend.hpp"

namespace stratrew {

std::string_view preludeText() {
  static const char* const text = R"(
fmod BOOL is
  sort Bool .
  op true : -> Bool [ctor] .
  op false : -> Bool [ctor] .
  op not_ : Bool -> Bool [prec 53 builtin(not)] .
  op _and_ : Bool Bool -> Bool [prec 55 gather (E e) builtin(and)] .
  op _or_ : Bool Bool -> Bool [prec 59 gather (E e) builtin(or)] .
  op _xor_ : Bool Bool -> Bool [prec 57 gather (E e) builtin(xor)] .
  op _implies_ : Bool Bool -> Bool [prec 61 gather (e E) builtin(implies)] .
  op _==_ : @Any @Any -> Bool [prec 51 poly builtin(eq)] .
  op _=/=_ : @Any @Any -> Bool [prec 51 poly builtin(neq)] .
endfm

fmod EXT-BOOL is
  protecting BOOL .
  op _and-then_ : Bool Bool -> Bool [strat (1 0) prec 55 gather (E e) builtin(and-then)] .
  op _or-else_ : Bool Bool -> Bool [strat (1 0) prec 59 gather (E e) builtin(or-else)] .
endfm

fmod NAT is
  protecting BOOL .
  sorts Zero NzNat Nat .
  subsorts Zero NzNat < Nat .
  op 0 : -> Zero [ctor] .
  op s_ : Nat -> NzNat [ctor prec 15 builtin(succ)] .
  op _+_ : Nat Nat -> Nat [prec 33 gather (E e) builtin(plus)] .
  op _*_ : Nat Nat -> Nat [prec 31 gather (E e) builtin(times)] .
  op sd : Nat Nat -> Nat [builtin(sd)] .
  op _rem_ : Nat Nat -> Nat [prec 31 gather (E e) builtin(rem)] .
  op _quo_ : Nat Nat -> Nat [prec 31 gather (E e) builtin(quo)] .
  op min : Nat Nat -> Nat [builtin(min)] .
  op max : Nat Nat -> Nat [builtin(max)] .
  op _<_ : Nat Nat -> Bool [prec 37 builtin(lt)] .
  op _<=_ : Nat Nat -> Bool [prec 37 builtin(le)] .
  op _>_ : Nat Nat -> Bool [prec 37 builtin(gt)] .
  op _>=_ : Nat Nat -> Bool [prec 37 builtin(ge)] .
endfm

fmod INT is
  protecting NAT .
  sorts NzInt Int .
  subsorts NzNat < NzInt < Int .
  subsort Nat < Int .
endfm
)";
  return text;
}

bool isPreludeModule(Symbol name) {
  const std::string& n = name.str();
  return n == "BOOL" || n == "EXT-BOOL" || n == "NAT" || n == "INT";
}

bool isPreludeSort(const std::string& name) {
  return name == "Bool" || name == "Zero" || name == "NzNat" || name == "Nat" ||
         name == "NzInt" || name == "Int";
}

}  // namespace stratrew
