/* Literal handling:
   operators inside strings must not count. */
class Literals {
    String describe(int n) {
        String op = "a && b || c ? x : y";
        char q = '?';
        char esc = '\'';
        String path = "C:\\tmp\\x";
        int slash = n / 2;
        // if (n > 0) && (n < 9) ? "yes" : "no"
        return n > 0 ? op + q + esc + path + slash : "none";
    }
}
