void f(int n, int x) {
    for (int i = 0; i < n; i++) {
        for (int j = 0; j < 2; j++) {
            x = x + x;
        }
    }
}
