void f(int n, int x, int y) {
    for (int i = 0; i < n; i++) {
        if (i < 3) {
            while (y > 0) {
                y = y - 1;
            }
        }
        x = x + y;
    }
}
