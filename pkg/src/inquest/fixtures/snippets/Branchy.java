public class Branchy {

    int score(int[] xs, int floor) {
        int total = 0;
        for (int x : xs) {
            if (x > floor && x % 2 == 0 || x == 99) {
                total += x;
            }
        }
        while (total > 1000) {
            total -= 7;
        }
        return total > 0 ? total : 0;
    }

    String label(int kind) {
        switch (kind) {
            case 0:
                return "none";
            case 1:
                return "one";
            default:
                return "many";
        }
    }

    int safeDiv(int a, int b) {
        try {
            return a / b;
        } catch (ArithmeticException e) {
            return 0;
        }
    }
}
